use super::*;
use crate::diagram::{braid_closure, parse_braid, parse_pd};

const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

fn q(e2: i64) -> LaurentPoly {
    LaurentPoly::monomial(1, e2)
}

#[test]
fn bracket_small() {
    assert_eq!(kauffman_bracket(&LinkDiagram::unknot()).unwrap(), circle_value());
    let k = LinkDiagram::unknot().add_kink(0, 1).unwrap();
    assert_eq!(kauffman_bracket(&k).unwrap(), &LaurentPoly::monomial(-1, 3) * &circle_value());
    let hopf = braid_closure(&parse_braid("s:2 1 1").unwrap());
    assert_eq!(kauffman_bracket(&hopf).unwrap(), bracket_state_sum(&hopf));
    let t = parse_pd(TREFOIL).unwrap();
    assert_eq!(kauffman_bracket(&t).unwrap(), bracket_state_sum(&t));
}

#[test]
fn block_matches_multicone() {
    for n in 1..=4 {
        assert_eq!(contracted_block(n).unwrap(), multicone_block(n).unwrap(), "N={n}");
    }
}

#[test]
fn colored_unknot() {
    for n in 1..=4 {
        let v = colored_jones(&LinkDiagram::unknot(), n).unwrap().value;
        assert_eq!(v, delta(n));
    }
}

#[test]
fn colored_methods_agree_on_small_diagrams() {
    let t = parse_pd(TREFOIL).unwrap();
    let hopf = braid_closure(&parse_braid("s:2 1 1").unwrap());
    let kink = parse_pd("X[1,1,2,2]").unwrap();
    for (d, nmax) in [(&t, 2), (&hopf, 3), (&kink, 3)] {
        for n in 1..=nmax {
            let a = colored_jones(d, n).unwrap().value;
            let b = multicone_colored_jones(d, n).unwrap().value;
            let c = colored_jones_literal(d, n).unwrap().value;
            assert_eq!(a, b, "N={n}");
            assert_eq!(a, c, "N={n}");
        }
    }
}

#[test]
fn colored_kink_factor() {
    // a positive kink multiplies J_N by (-1)^N q^(N^2/2 + N)
    let u = LinkDiagram::unknot();
    let k = u.add_kink(0, 1).unwrap();
    for n in 1..=3u32 {
        let a = colored_jones(&u, n).unwrap().value;
        let b = colored_jones(&k, n).unwrap().value;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let f = LaurentPoly::monomial(sign, (n * n + 2 * n) as i64);
        assert_eq!(b, &a * &f, "N={n}");
    }
}

#[test]
fn shifted_unknot() {
    for n in 0..=4u32 {
        let s = shifted_colored_jones(&LinkDiagram::unknot(), n).unwrap();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let want = LaurentPoly::from_terms((0..=n as i64).map(|k| (4 * k, sign)));
        assert_eq!(s, want);
    }
    let _ = q(0);
}

#[test]
fn blocks_agree_at_large_colors() {
    for n in 5..=6 {
        assert_eq!(contracted_block(n).unwrap(), multicone_block(n).unwrap(), "N={n}");
    }
}

#[test]
fn unknot_tail() {
    let t = tail_extract(&LinkDiagram::unknot(), 5, None).unwrap();
    assert!(t.certified);
    assert_eq!(t.certified_degree2, 5);
    assert_eq!(t.prefix_poly(), &q(0) + &q(4));
}

#[test]
fn trefoil_tail_and_reduction() {
    let t = braid_closure(&parse_braid("s:2 -1 -1 -1").unwrap());
    let tail = tail_extract(&t, 6, None).unwrap();
    assert!(tail.violations.is_empty());
    let chk = reduction_tail_check(&t, 5).unwrap();
    assert!(chk.agree);
}

#[test]
fn inadequate_tail_is_flagged() {
    let k = parse_pd("X[1,1,2,2]").unwrap();
    assert!(!tail_extract(&k, 3, None).unwrap().certified);
}
