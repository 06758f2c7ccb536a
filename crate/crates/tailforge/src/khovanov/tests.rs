use super::*;
use crate::algebra::euler_char;
use crate::diagram::{braid_closure, parse_braid, parse_pd, BraidWord};
use proptest::prelude::*;
use crate::jones::kauffman_bracket;

const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

fn table(entries: &[((i64, i64), u64)]) -> KhTable {
    KhTable::from_entries(entries.iter().copied())
}

#[test]
fn unknot_both_ways() {
    let u = LinkDiagram::unknot();
    let c = build_complex(&u).unwrap();
    assert_eq!(c.generator_count(), 2);
    let want = table(&[((0, 1), 1), ((0, -1), 1)]);
    assert_eq!(homology(&c).table, want);
    assert_eq!(kh_homology(&u).unwrap().table, want);
}

#[test]
fn kinks_shift_the_unknot() {
    let u = table(&[((0, 1), 1), ((0, -1), 1)]);
    let pos = parse_pd("X[1,1,2,2]").unwrap();
    let neg = parse_pd("X[1,2,2,1]").unwrap();
    assert_eq!(homology(&build_complex(&pos).unwrap()).table, u.shifted(1, 1));
    assert_eq!(kh_homology(&pos).unwrap().table, u.shifted(1, 1));
    assert_eq!(kh_homology(&neg).unwrap().table, u.shifted(-1, -1));
}

#[test]
fn trefoil_complex() {
    let t = parse_pd(TREFOIL).unwrap();
    let c = build_complex(&t).unwrap();
    assert!(c.check_dd() && c.check_degrees());
    let h = homology(&c).table;
    assert_eq!(euler_char(&h), kauffman_bracket(&t).unwrap());
    let s = simplify_scan(&c);
    assert!(s.generator_count() <= 8);
    assert_eq!(homology(&s).table, h);
    assert_eq!(s.generator_count() as u64, h.total_rank());
    assert_eq!(simplify_scan(&s), s);
    assert_eq!(scan_table(&t, ScanOptions { check_dd: true }).unwrap(), h);
}

#[test]
fn split_union_is_a_tensor() {
    let t = parse_pd(TREFOIL).unwrap();
    let tu = parse_pd(&format!("{TREFOIL} U")).unwrap();
    let h = kh_homology(&t).unwrap().table;
    let u = table(&[((0, 1), 1), ((0, -1), 1)]);
    assert_eq!(kh_homology(&tu).unwrap().table, h.tensor(&u));
    assert_eq!(homology(&build_complex(&tu).unwrap()).table, h.tensor(&u));
}

#[test]
fn scan_matches_cube_on_small_closures() {
    for w in ["s:3 1 -2 1 -2", "s:3 1 1 2 -1 2", "s:2 1 1 1 1", "s:4 1 -2 3 -1 2", "s:3 -1 -1 -2 -2 -1"] {
        let d = braid_closure(&parse_braid(w).unwrap());
        let cube = homology(&build_complex(&d).unwrap()).table;
        assert_eq!(scan_table(&d, ScanOptions { check_dd: true }).unwrap(), cube, "{w}");
        assert_eq!(euler_char(&cube), kauffman_bracket(&d).unwrap(), "{w}");
    }
}

fn random_closure() -> impl Strategy<Value = LinkDiagram> {
    (2u32..5, prop::collection::vec((1i32..4, any::<bool>()), 1..7)).prop_map(|(s, ls)| {
        let letters = ls.into_iter().map(|(i, neg)| {
            let i = 1 + (i - 1) % (s as i32 - 1);
            if neg { -i } else { i }
        });
        braid_closure(&BraidWord::new(s, letters.collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, ..ProptestConfig::default() })]

    #[test]
    fn scan_cube_and_elimination_agree(d in random_closure()) {
        let c = build_complex(&d).unwrap();
        let full = homology(&c).table;
        let s = simplify_scan(&c);
        prop_assert!(s.check_dd());
        prop_assert_eq!(&homology(&s).table, &full);
        prop_assert_eq!(&scan_table(&d, ScanOptions { check_dd: true }).unwrap(), &full);
        prop_assert_eq!(euler_char(&full), kauffman_bracket(&d).unwrap());
    }
}

fn unknot_n2() -> TwistedDiagram {
    TwistedDiagram::new(&LinkDiagram::unknot(), 2).unwrap()
}

#[test]
fn shift_bookkeeping() {
    let t = parse_pd(TREFOIL).unwrap();
    let r = shifted_homology(&twisted_diagram(&t, 1, 0).unwrap()).unwrap();
    assert_eq!(r.shifts_applied, (3, 2));
    assert_eq!(r.table, kh_homology(&t).unwrap().table.shifted(3, 2));
    assert_eq!(unknot_n2().circle_weight(), 2);
    assert_eq!(unknot_n2().crossing_weight(), 0);
}

#[test]
fn shifted_tables_ignore_adequate_kinks() {
    let hopf = braid_closure(&parse_braid("s:2 -1 -1").unwrap());
    for d in [parse_pd(TREFOIL).unwrap(), hopf, LinkDiagram::unknot()] {
        let kinked = d.add_kink(0, -1).unwrap();
        let a = shifted_homology(&twisted_diagram(&d, 1, 0).unwrap()).unwrap();
        let b = shifted_homology(&twisted_diagram(&kinked, 1, 0).unwrap()).unwrap();
        assert_eq!(a.table, b.table);
        assert_ne!(a.shifts_applied, b.shifts_applied);
    }
}

#[test]
fn color_one_twists_change_nothing() {
    let t = parse_pd(TREFOIL).unwrap();
    let f = stabilization_front(&t, 1, &[1, 2, 3]).unwrap();
    assert!(f.fronts.iter().all(|(_, fr)| fr.is_none()));
    let bare = shifted_homology(&twisted_diagram(&t, 1, 0).unwrap()).unwrap().table;
    assert!(f.tables.values().all(|tb| *tb == bare));
}

#[test]
fn unknot_color_two_fronts() {
    let u = LinkDiagram::unknot();
    let f = stabilization_front(&u, 2, &[1, 2, 3, 4]).unwrap();
    assert_eq!(f.fronts, vec![(1, Some(0)), (2, Some(4)), (3, Some(8)), (4, Some(12))]);
    assert!(f.nondecreasing);
    for k in 2..=4 {
        assert_eq!(f.tables[&k].get(0, 0), 1);
        assert_eq!(f.tables[&k].row(0), [(0, 1), (2, 1)].into_iter().collect());
    }
}

#[test]
fn bounds_below_the_front() {
    let u = LinkDiagram::unknot();
    let f = stabilization_front(&u, 2, &[2, 3]).unwrap();
    let r = shifted_homology(&twisted_diagram(&u, 2, 3).unwrap()).unwrap();
    let rep = verify_bounds(&r, &u, None, f.front(3).flatten());
    for name in ["bd1", "bd3", "bd4", "endi", "smfr"] {
        let c = rep.check(name).unwrap();
        assert!(c.applicable && c.pass, "{name}: {c:?}");
    }
    assert!(rep.passes());
}

#[test]
fn mis_shifted_table_is_caught() {
    let u = LinkDiagram::unknot();
    let mut r = kh_homology(&u).unwrap();
    r.table = r.table.shifted(-4, 0);
    let rep = verify_bounds(&r, &u, None, None);
    let bd1 = rep.check("bd1").unwrap();
    assert!(!bd1.pass);
    assert_eq!(bd1.violations, vec![(-4, -1), (-4, 1)]);
    assert!(!rep.passes());
}

#[test]
fn inadequate_bounds_are_gated() {
    let k = parse_pd("X[1,1,2,2]").unwrap();
    let r = shifted_homology(&twisted_diagram(&k, 1, 0).unwrap()).unwrap();
    let rep = verify_bounds(&r, &k, None, None);
    assert!(!rep.adequate);
    assert!(!rep.check("bd3").unwrap().applicable);
    assert!(rep.check("bd3a").unwrap().pass && rep.check("bd2a").unwrap().pass);
}

#[test]
fn tail_homology_of_unknot_and_trefoil() {
    use crate::jones::tail_extract;
    let u = tail_homology_estimate(&LinkDiagram::unknot(), &[1, 2], 2).unwrap();
    assert!(u.certified);
    assert_eq!(u.certified_max_i2, Some(0));
    assert_eq!(u.table.get(0, 0), 1);
    let t = parse_pd(TREFOIL).unwrap();
    let est = tail_homology_estimate(&t, &[1, 2], 2).unwrap();
    assert!(est.certified);
    assert_eq!(est.table, table(&[((0, 0), 1), ((0, 2), 1)]));
    let tail = tail_extract(&t, 5, None).unwrap();
    let ad = est.anti_diagonal_check(&tail);
    assert!(!ad.is_empty() && ad.iter().all(|a| a.agree), "{ad:?}");
    let single = tail_homology_estimate(&t, &[2], 2).unwrap();
    assert!(!single.certified && single.comparisons.is_empty());
    assert!(single.notes.iter().any(|n| n.contains("no comparison possible")));
}

#[test]
fn crossing_against_projector() {
    let kink = parse_pd("X[1,2,2,1]").unwrap();
    let r = crossing_vs_projector_check(&kink, 0, 1, 2).unwrap();
    assert!(r.agree && r.compared_max_i2 == Some(0));
    let hopf = braid_closure(&parse_braid("s:2 -1 -1").unwrap());
    let r = crossing_vs_projector_check(&hopf, 0, 2, 2).unwrap();
    assert!(r.agree, "{:?}", r.mismatched_rows);
    assert_eq!(r.compared_max_i2, Some(4));
    assert!(!r.uncertified_rows.is_empty() && r.uncertified_rows.iter().all(|&i| i > 4));
}
