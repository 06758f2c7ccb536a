//! Coefficient fields for elimination: a fast checked `i64` rational and an
//! exact big rational fallback.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};

pub(crate) trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
}

pub(crate) type Q64 = Ratio<i64>;

impl Field for Q64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
}

/// Rank of a sparse matrix given as rows of `(column, value)`.
pub(crate) fn rank<F: Field>(rows: Vec<Vec<(usize, F)>>) -> Option<usize> {
    use std::collections::BTreeMap;
    // pivot column -> reduced row, each row's first entry is its pivot
    let mut pivots: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
    for row in rows {
        let mut cur: BTreeMap<usize, F> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        loop {
            let Some((&c, v)) = cur.iter().next() else { break };
            let Some(p) = pivots.get(&c) else {
                let v = v.clone();
                let normalized = cur
                    .into_iter()
                    .map(|(k, x)| x.div(&v).map(|y| (k, y)))
                    .collect::<Option<Vec<_>>>()?;
                pivots.insert(c, normalized);
                break;
            };
            let f = v.clone();
            for (k, x) in p {
                let t = f.mul(x)?;
                let e = cur.entry(*k).or_insert_with(F::zero);
                *e = e.sub(&t)?;
                if e.is_zero() {
                    cur.remove(k);
                }
            }
        }
    }
    Some(pivots.len())
}

