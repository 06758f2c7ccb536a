use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;

/// Dense polynomial over Z, ascending coefficients, no trailing zeros.
type Dense = Vec<BigInt>;

fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn content(p: &Dense) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &Dense) -> Dense {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of a by b (deg a >= deg b).
fn prem(a: &Dense, b: &Dense) -> Dense {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        let off = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[off + i] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() {
        return primitive(b);
    }
    if b.is_empty() {
        return primitive(a);
    }
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive(a), primitive(b))
    } else {
        (primitive(b), primitive(a))
    };
    while !y.is_empty() {
        let r = prem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        for c in x.iter_mut() {
            *c = -c.clone();
        }
    }
    x
}

/// Laurent polynomial to (shift, dense) with dense having nonzero constant term.
fn to_dense(p: &LaurentPoly) -> (i64, Dense) {
    let lo = p.min_exp2().unwrap_or(0);
    let hi = p.max_exp2().unwrap_or(0);
    let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (e, c) in p.terms() {
        v[(e - lo) as usize] = c.clone();
    }
    trim(&mut v);
    (lo, v)
}

fn from_dense(shift: i64, d: &Dense) -> LaurentPoly {
    LaurentPoly::from_terms(d.iter().enumerate().map(|(i, c)| (shift + i as i64, c.clone())))
}

/// Greatest common divisor of two Laurent polynomials up to units `±q^(k/2)`,
/// normalized to have exponents starting at 0 and a positive leading coefficient.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (_, da) = to_dense(a);
    let (_, db) = to_dense(b);
    from_dense(0, &dense_gcd(&da, &db))
}

/// Quotient of two Laurent polynomials in q^(1/2), kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.canonicalize();
        r
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc { num: p, den: LaurentPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(c, 0))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The polynomial value when the denominator is a unit.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one();
            return;
        }
        let s = self.den.min_exp2().unwrap();
        if s != 0 {
            self.den = self.den.shift(-s);
            self.num = self.num.shift(-s);
        }
        if self.den.len() > 1 {
            let g = poly_gcd(&self.num, &self.den);
            if g.len() > 1 {
                self.num = self.num.div_exact(&g).expect("gcd divides numerator");
                self.den = self.den.div_exact(&g).expect("gcd divides denominator");
                let s = self.den.min_exp2().unwrap();
                if s != 0 {
                    self.den = self.den.shift(-s);
                    self.num = self.num.shift(-s);
                }
            }
        }
        let c = self.num.content().gcd(&self.den.content());
        let neg = self.den.leading_coeff().unwrap().is_negative();
        let c = if neg { -c } else { c };
        if !c.is_one() {
            self.num = LaurentPoly::from_terms(self.num.terms().map(|(e, v)| (e, v / &c)));
            self.den = LaurentPoly::from_terms(self.den.terms().map(|(e, v)| (e, v / &c)));
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.pretty())
        } else {
            write!(f, "({}) / ({})", self.num.pretty(), self.den.pretty())
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn cancels_common_factor() {
        // (1 - q^4) / (1 - q^2) = 1 + q^2
        let r = RatFunc::new(lp(&[(0, 1), (8, -1)]), lp(&[(0, 1), (4, -1)]));
        assert_eq!(r.to_poly(), Some(lp(&[(0, 1), (4, 1)])));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RatFunc::from_poly(lp(&[(2, 1), (-2, 1)]));
        let b = a.inv();
        assert!((&a * &b).is_one());
        assert!(!b.den().is_one());
    }

    #[test]
    fn gcd_of_products() {
        let a = lp(&[(0, 1), (2, 1)]);
        let b = lp(&[(0, 2), (2, -3), (4, 1)]);
        let c = lp(&[(0, 1), (4, 7)]);
        let g = poly_gcd(&(&a * &b), &(&a * &c));
        assert_eq!(g, a);
    }
}
