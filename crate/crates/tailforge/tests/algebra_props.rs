use num_bigint::BigInt;
use proptest::prelude::*;
use tailforge::algebra::*;

fn poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-12i64..12, -20i64..20), 0..max_terms).prop_map(LaurentPoly::from_terms)
}

/// Dense power-series product of `(1 - x^(2(i-m)))` over `(1 - x^(2m))`,
/// truncated at x-degree `deg`; division by `1 - x^k` is a running sum.
fn brace_series(i: u32, j: u32, deg: usize) -> Vec<i64> {
    let mut s = vec![0i64; deg + 1];
    s[0] = 1;
    for m in 0..j {
        let k = 2 * (i - m) as usize;
        for e in (k..=deg).rev() {
            s[e] -= s[e - k];
        }
    }
    for m in 1..=j {
        let k = 2 * m as usize;
        for e in k..=deg {
            s[e] += s[e - k];
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn ratfunc_agrees_with_polynomials(a in poly(6), b in poly(6)) {
        let (ra, rb) = (RatFunc::from_poly(a.clone()), RatFunc::from_poly(b.clone()));
        prop_assert_eq!((&ra + &rb).to_poly(), Some(&a + &b));
        prop_assert_eq!((&ra - &rb).to_poly(), Some(&a - &b));
        prop_assert_eq!((&ra * &rb).to_poly(), Some(&a * &b));
        prop_assert_eq!((-&ra).to_poly(), Some(-&a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly(5), b in poly(5), c in poly(5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
        prop_assert!(a.terms().all(|(_, c)| *c != BigInt::from(0)));
    }

    #[test]
    fn lp_arith_ops(a in poly(5), b in poly(5), e2 in -9i64..9, c in -5i64..5) {
        prop_assert_eq!(lp_arith(&a, &b, LpOp::Add), &a + &b);
        prop_assert_eq!(lp_arith(&a, &b, LpOp::Mul), &a * &b);
        prop_assert_eq!(lp_arith(&a, &b, LpOp::Neg), -&a);
        let m = LaurentPoly::monomial(c, e2);
        prop_assert_eq!(lp_arith(&a, &b, LpOp::ScaleByMonomial { c: c.into(), e2 }), &a * &m);
    }

    #[test]
    fn ratfunc_field_laws(a in poly(4), b in poly(4), c in poly(4)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let x = RatFunc::new(a.clone(), b.clone());
        let y = RatFunc::new(c.clone(), b.clone());
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        let z = RatFunc::new(&a * &c, &b * &c);
        prop_assert_eq!(z, x.clone());
        prop_assert!(x.den().leading_coeff().unwrap() > &BigInt::from(0));
    }

    #[test]
    fn euler_char_is_additive_and_shift_covariant(
        cells in prop::collection::vec(((-6i64..6, -6i64..6), 1u64..4), 0..8),
        more in prop::collection::vec(((-6i64..6, -6i64..6), 1u64..4), 0..8),
        h2 in -4i64..4, qs in -4i64..4,
    ) {
        let a = KhTable::from_entries(cells);
        let b = KhTable::from_entries(more);
        prop_assert_eq!(euler_char(&a.direct_sum(&b)), &euler_char(&a) + &euler_char(&b));
        prop_assert_eq!(euler_char(&a.shifted(h2, qs)), &euler_char(&a) * &decat_substitute(h2, qs));
        prop_assert_eq!(euler_char(&a.tensor(&b)), &euler_char(&a) * &euler_char(&b));
    }
}

#[test]
fn brace_symmetry_and_series() {
    for i in 0..=9u32 {
        for j in 0..=i {
            let p = brace_poly(i, j).unwrap();
            assert_eq!(p, brace_poly(i, i - j).unwrap(), "({i},{j})");
            // palindromic about x^(j(i-j)); exponents are doubled in the store
            let top = 2 * (j * (i - j)) as i64;
            assert_eq!(p, LaurentPoly::from_terms(p.terms().map(|(e, c)| (2 * top - e, c.clone()))));
            let deg = (2 * i * j) as usize;
            let s = brace_series(i, j, deg);
            for (k, c) in s.iter().enumerate() {
                assert_eq!(p.coeff(2 * k as i64), BigInt::from(*c), "({i},{j}) x^{k}");
            }
            assert!(p.terms().all(|(_, c)| *c > BigInt::from(0)));
        }
    }
}

#[test]
fn circle_square() {
    let d = circle_value();
    assert_eq!(&d * &d, LaurentPoly::from_terms([(4i64, 1i64), (0, 2), (-4, 1)]));
}

#[test]
fn canonical_text_and_json() {
    let p = LaurentPoly::from_terms([(3i64, -2i64), (-2, 1), (0, 4)]);
    assert_eq!(p.render(), "1*q^(-2/2) + 4*q^(0/2) + -2*q^(3/2)");
    let j = p.to_json();
    assert_eq!(j, serde_json::json!([[-2, 1], [0, 4], [3, -2]]));
    assert_eq!(LaurentPoly::from_json(&j), Some(p));
}
