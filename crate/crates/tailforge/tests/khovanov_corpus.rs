use tailforge::algebra::euler_char;
use tailforge::corpus::bundled;
use tailforge::jones::kauffman_bracket;
use tailforge::khovanov::*;

#[test]
fn complexes_square_to_zero_and_match_the_bracket() {
    for e in bundled() {
        let d = &e.diagram;
        let scanned = scan_table(d, ScanOptions { check_dd: true }).unwrap();
        assert_eq!(euler_char(&scanned), kauffman_bracket(d).unwrap(), "{}", e.name);
        let c = build_complex(d).unwrap();
        assert!(c.check_dd() && c.check_degrees(), "{}", e.name);
        let s = simplify_scan(&c);
        assert!(s.check_dd(), "{}", e.name);
        assert_eq!(homology(&c).table, scanned, "{}", e.name);
        assert_eq!(homology(&s).table, scanned, "{}", e.name);
    }
}

#[test]
fn lower_homological_bound_on_the_corpus() {
    for e in bundled() {
        let d = &e.diagram;
        let r = shifted_homology(&twisted_diagram(d, 1, 0).unwrap()).unwrap();
        let rep = verify_bounds(&r, d, None, None);
        assert!(rep.check("smfr").unwrap().pass, "{}", e.name);
        assert!(rep.check("bd2a").unwrap().pass && rep.check("bd3a").unwrap().pass, "{}", e.name);
        if rep.adequate {
            assert!(rep.passes(), "{}: {:?}", e.name, rep.checks);
        }
    }
}
