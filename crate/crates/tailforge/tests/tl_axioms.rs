use tailforge::algebra::{circle_value, LaurentPoly, RatFunc};
use tailforge::tl::*;

fn one(t: TLTangle) -> TLMorphism {
    TLMorphism::from_tangle(t, RatFunc::one())
}

/// `(-1)^N [N+1]` by the three-term recursion, independent of the TL code.
fn quantum_dim(n: u32) -> LaurentPoly {
    let d = circle_value();
    let (mut a, mut b) = (LaurentPoly::one(), d.clone());
    for _ in 0..n {
        let c = &(&d * &b) - &a;
        a = b;
        b = c;
    }
    a
}

#[test]
fn projectors_are_idempotent_and_kill_turnbacks() {
    for a in 1..=DEFAULT_CAP {
        let p = jw_projector(a).unwrap();
        let n = a as usize;
        assert_eq!(tl_compose(&p, &p).unwrap(), *p, "p{a} idempotent");
        assert!(p.coeff(&TLTangle::identity(n)).is_one());
        for i in 0..n.saturating_sub(1) {
            assert!(tl_compose(&p, &one(TLTangle::cap(n, i))).unwrap().is_empty(), "cap {i} after p{a}");
            assert!(tl_compose(&one(TLTangle::cup(n, i)), &p).unwrap().is_empty(), "cup {i} before p{a}");
        }
        let tr = close_trace(&p).unwrap();
        assert_eq!(tr.to_poly(), Some(quantum_dim(a)), "trace p{a}");
        assert_eq!(tr.to_poly(), Some(delta(a)));
    }
}

#[test]
fn larger_projectors_absorb_smaller() {
    for a in 2..=DEFAULT_CAP {
        for b in 1..a {
            assert!(absorb_check(a, b).unwrap(), "p{a} absorbs p{b}");
        }
    }
}

#[test]
fn skein_and_trace_examples() {
    let e = one(TLTangle::e(2, 0));
    assert_eq!(close_trace(&e).unwrap(), RatFunc::from_poly(circle_value()));
    let plus = crossing_expand(1);
    let coeffs: Vec<LaurentPoly> = plus.terms().map(|(_, c)| c.to_poly().unwrap()).collect();
    let mut exps: Vec<i64> = coeffs.iter().map(|c| c.min_exp2().unwrap()).collect();
    exps.sort();
    assert_eq!(exps, vec![-1, 1]);
    assert_eq!(tl_compose(&plus, &crossing_expand(-1)).unwrap(), TLMorphism::identity(2));
    let cap = one(TLTangle::cap(2, 0));
    let cup = one(TLTangle::cup(2, 0));
    let s = tl_compose(&cup, &cap).unwrap();
    assert_eq!(s.coeff(&TLTangle::identity(0)), RatFunc::from_poly(circle_value()));
}

#[test]
fn cap_is_enforced() {
    assert!(jw_projector_capped(4, 3).is_err());
    assert!(absorb_check(DEFAULT_CAP + 1, 1).is_err());
}
