use tailforge::algebra::LaurentPoly;
use tailforge::corpus::{bundled, bundled_entry};
use tailforge::jones::*;
use tailforge::tl::delta;

#[test]
fn color_one_is_the_bracket() {
    for e in bundled() {
        let d = &e.diagram;
        assert_eq!(colored_jones(d, 1).unwrap().value, kauffman_bracket(d).unwrap(), "{}", e.name);
    }
}

#[test]
fn kink_framing_factor_at_every_color() {
    for e in bundled().into_iter().filter(|e| e.diagram.n() <= 4) {
        let d = &e.diagram;
        let k = d.add_kink(0, 1).unwrap();
        for n in 1..=3u32 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let f = LaurentPoly::monomial(sign, (n * n + 2 * n) as i64);
            let a = colored_jones(d, n).unwrap().value;
            assert_eq!(colored_jones(&k, n).unwrap().value, &a * &f, "{} N={n}", e.name);
        }
    }
}

#[test]
fn unknot_values() {
    let u = bundled_entry("unknot").unwrap().diagram;
    for n in 1..=4u32 {
        assert_eq!(colored_jones(&u, n).unwrap().value, delta(n));
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let want = LaurentPoly::from_terms((0..=n as i64).map(|k| (4 * k, sign)));
        assert_eq!(shifted_colored_jones(&u, n).unwrap(), want);
    }
    assert!(shifted_colored_jones(&u, 0).unwrap().is_one());
}

#[test]
fn methods_agree_where_affordable() {
    for e in bundled() {
        let d = &e.diagram;
        for n in (1..=4u32).filter(|n| (n * n) as usize * d.n() <= 20) {
            let a = colored_jones(d, n).unwrap().value;
            assert_eq!(multicone_colored_jones(d, n).unwrap().value, a, "{} N={n}", e.name);
            if d.n() <= 3 && n <= 3 {
                assert_eq!(colored_jones_literal(d, n).unwrap().value, a, "{} N={n}", e.name);
            }
        }
    }
}

#[test]
fn tails_extend_as_colors_grow() {
    for name in ["unknot", "trefoil-left", "hopf-neg", "figure-eight", "unknot-kink-neg"] {
        let d = bundled_entry(name).unwrap().diagram;
        let mut prev: Option<tailforge::algebra::TailSeries> = None;
        for k in 1..=5u32 {
            let t = tail_extract(&d, k, None).unwrap();
            assert!(t.violations.is_empty(), "{name} {:?}", t.violations);
            if let Some(p) = &prev {
                assert!(t.certified_degree2 >= p.certified_degree2);
                for (m, c) in &p.coeffs {
                    assert_eq!(t.coeffs.get(m), Some(c), "{name} q^{m}");
                }
            }
            prev = Some(t);
        }
    }
}

#[test]
fn user_n_min_widens_certification() {
    let d = bundled_entry("trefoil-left").unwrap().diagram;
    let plain = tail_extract(&d, 5, None).unwrap();
    let with = tail_extract(&d, 5, Some(2)).unwrap();
    assert!(with.certified_degree2 > plain.certified_degree2);
    assert_eq!(plain.n_used, 3);
}
