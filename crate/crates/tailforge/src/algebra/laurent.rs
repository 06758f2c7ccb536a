use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Laurent polynomial in q with half-integer exponents.
///
/// Keys are doubled exponents: the key `k` stands for `q^(k/2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^(e2/2)`.
    pub fn monomial(c: impl Into<BigInt>, e2: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e2, c.into());
        p
    }

    /// Builds from (doubled exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c.into());
        }
        p
    }

    /// Polynomial in q with integer exponents: `coeffs[k]` multiplies `q^(lo+k)`.
    pub fn from_q_coeffs(lo: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * (lo + k as i64), c)))
    }

    pub fn add_term(&mut self, e2: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e2) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^(e2/2)`.
    pub fn coeff(&self, e2: i64) -> BigInt {
        self.terms.get(&e2).cloned().unwrap_or_default()
    }

    pub fn min_exp2(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp2(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    /// Multiplies by `c * q^(e2/2)`.
    pub fn scale_monomial(&self, c: &BigInt, e2: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + e2, v * c)).collect(),
        }
    }

    pub fn shift(&self, e2: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + e2, v.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.scale_monomial(c, 0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes q -> q^{-1}.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (-e, v.clone())).collect(),
        }
    }

    /// True when every exponent is an even integer power of q, i.e. the
    /// polynomial lies in Z[q^2, q^-2].
    pub fn in_q_squared(&self) -> bool {
        self.terms.keys().all(|e| e.rem_euclid(4) == 0)
    }

    /// True when every exponent is an integer power of q.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.rem_euclid(2) == 0)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Exact division by a nonzero polynomial; `None` when the remainder is nonzero.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dl, dlc) = d.terms.iter().next_back().map(|(e, c)| (*e, c.clone())).unwrap();
        let dlow = d.min_exp2().unwrap();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            if e - dl < rem.min_exp2().unwrap() - dlow {
                return None;
            }
            let (qc, r) = c.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            let t = e - dl;
            for (de, dc) in d.terms.iter() {
                rem.add_term(de + t, -(dc * &qc));
            }
            quo.add_term(t, qc);
        }
        Some(quo)
    }

    /// Renders as ascending `c*q^(k/2)` terms joined by ` + `.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("{c}*q^({e}/2)"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Human-friendly rendering with integer or half-integer exponents.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let ex = if e % 2 == 0 { format!("{}", e / 2) } else { format!("{e}/2") };
            match (*e == 0, a.is_one()) {
                (true, _) => s.push_str(&a.to_string()),
                (false, true) => s.push_str(&format!("q^{ex}")),
                (false, false) => s.push_str(&format!("{a}q^{ex}")),
            }
        }
        s
    }

    /// `[[doubled_exp, coeff], ...]` in ascending order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let cv = match i64::try_from(c) {
                        Ok(v) => serde_json::Value::from(v),
                        Err(_) => serde_json::Value::from(c.to_string()),
                    };
                    serde_json::Value::Array(vec![serde_json::Value::from(*e), cv])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let arr = v.as_array()?;
        let mut p = Self::zero();
        for t in arr {
            let pair = t.as_array()?;
            let e = pair.first()?.as_i64()?;
            let c = match pair.get(1)? {
                serde_json::Value::Number(n) => BigInt::from(n.as_i64()?),
                serde_json::Value::String(s) => s.parse().ok()?,
                _ => return None,
            };
            p.add_term(e, c);
        }
        Some(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        LaurentPoly::from_json(&v).ok_or_else(|| serde::de::Error::custom("bad polynomial"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, o: LaurentPoly) -> LaurentPoly {
        self += &o;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        for (e, c) in o.terms.iter() {
            self.add_term(*e, c.clone());
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in o.terms.iter() {
            r.add_term(*e, -c);
        }
        r
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in o.terms.iter() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

/// Selector for [`lp_arith`].
#[derive(Clone, Debug)]
pub enum LpOp {
    Add,
    Mul,
    Neg,
    /// Multiply `a` by `c * q^(e2/2)`; `b` is ignored.
    ScaleByMonomial { c: BigInt, e2: i64 },
}

pub fn lp_arith(a: &LaurentPoly, b: &LaurentPoly, which: LpOp) -> LaurentPoly {
    match which {
        LpOp::Add => a + b,
        LpOp::Mul => a * b,
        LpOp::Neg => -a,
        LpOp::ScaleByMonomial { c, e2 } => a.scale_monomial(&c, e2),
    }
}

/// The unknot value `-(q + q^-1)`.
pub fn circle_value() -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_inverse() {
        let a = LaurentPoly::from_terms([(2, 1), (-2, 1)]);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn half_powers_multiply() {
        let h = LaurentPoly::monomial(1, 1);
        assert_eq!(&h * &h, LaurentPoly::monomial(1, 2));
    }

    #[test]
    fn circle_squared() {
        let d = circle_value();
        assert_eq!(&d * &d, LaurentPoly::from_terms([(4, 1), (0, 2), (-4, 1)]));
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly::from_terms([(0, 1), (4, -1)]);
        let b = LaurentPoly::from_terms([(0, 1), (2, -1)]);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, LaurentPoly::from_terms([(0, 1), (2, 1)]));
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn render_format() {
        let p = LaurentPoly::from_terms([(3, 2), (-1, -1)]);
        assert_eq!(p.render(), "-1*q^(-1/2) + 2*q^(3/2)");
        assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }
}
