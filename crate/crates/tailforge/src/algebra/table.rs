use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPoly;

/// Bigraded dimension table. Keys are (doubled h-degree, q-degree).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhTable {
    entries: BTreeMap<(i64, i64), u64>,
}

impl KhTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = ((i64, i64), u64)>>(it: I) -> Self {
        let mut t = Self::new();
        for ((i2, j), d) in it {
            t.add(i2, j, d);
        }
        t
    }

    pub fn add(&mut self, i2: i64, j: i64, d: u64) {
        if d == 0 {
            return;
        }
        *self.entries.entry((i2, j)).or_insert(0) += d;
    }

    pub fn get(&self, i2: i64, j: i64) -> u64 {
        self.entries.get(&(i2, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Shift by `h^(h2/2) q^qs`.
    pub fn shifted(&self, h2: i64, qs: i64) -> Self {
        Self::from_entries(self.entries().map(|((i, j), d)| ((i + h2, j + qs), d)))
    }

    /// Entries with doubled h-degree equal to `i2`.
    pub fn row(&self, i2: i64) -> BTreeMap<i64, u64> {
        self.entries
            .range((i2, i64::MIN)..=(i2, i64::MAX))
            .map(|((_, j), d)| (*j, *d))
            .collect()
    }

    pub fn rows(&self) -> Vec<i64> {
        let mut r: Vec<i64> = self.entries.keys().map(|k| k.0).collect();
        r.dedup();
        r
    }

    pub fn min_i2(&self) -> Option<i64> {
        self.entries.keys().next().map(|k| k.0)
    }

    /// Tensor product over the field: dimensions multiply, degrees add.
    pub fn tensor(&self, o: &KhTable) -> KhTable {
        let mut t = KhTable::new();
        for ((i1, j1), d1) in self.entries() {
            for ((i2, j2), d2) in o.entries() {
                t.add(i1 + i2, j1 + j2, d1 * d2);
            }
        }
        t
    }

    pub fn direct_sum(&self, o: &KhTable) -> KhTable {
        let mut t = self.clone();
        for ((i, j), d) in o.entries() {
            t.add(i, j, d);
        }
        t
    }

    /// `[[i2, j, dim], ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries()
                .map(|((i, j), d)| serde_json::json!([i, j, d]))
                .collect(),
        )
    }

    /// Plain-text grid: one line per h-degree.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i2 in self.rows() {
            let h = if i2 % 2 == 0 { format!("{}", i2 / 2) } else { format!("{i2}/2") };
            let cells: Vec<String> = self.row(i2).iter().map(|(j, d)| format!("q^{j}:{d}")).collect();
            s.push_str(&format!("h={h}: {}\n", cells.join(" ")));
        }
        s
    }
}

/// `sum (-1)^j q^(i+j) dim`, with `i` half-integral.
pub fn euler_char(t: &KhTable) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for ((i2, j), d) in t.entries() {
        let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(i2 + 2 * j, BigInt::from(sign * d as i64));
    }
    p
}

/// Image of the grading shift `h^(h2/2) q^qp` under h -> q, q -> -q.
pub fn decat_substitute(h2: i64, qp: i64) -> LaurentPoly {
    let sign = if qp.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentPoly::monomial(sign, h2 + 2 * qp)
}

/// Stable low-degree part of the normalized colored Jones series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSeries {
    /// Coefficient of `q^m` for certified `m`.
    pub coeffs: BTreeMap<i64, BigInt>,
    /// Twice the degree bound: coefficients of `q^m` with `2m < certified_degree2` are certified.
    pub certified_degree2: i64,
    /// `(N, (-1)^(g N))` for every color used.
    pub sign_normalization: Vec<(u32, i32)>,
    pub certified: bool,
    pub n_used: i64,
    pub n_max: u32,
    /// Colors whose series disagreed inside the certified range.
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl TailSeries {
    pub fn prefix_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(m, c)| (2 * m, c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_examples() {
        let t = KhTable::from_entries([((0, 0), 1)]);
        assert_eq!(euler_char(&t), LaurentPoly::one());
        let u = KhTable::from_entries([((0, 1), 1), ((0, -1), 1)]);
        assert_eq!(euler_char(&u), LaurentPoly::from_terms([(2, -1), (-2, -1)]));
        assert!(euler_char(&KhTable::new()).is_zero());
    }

    #[test]
    fn decat_examples() {
        assert_eq!(decat_substitute(2, 0), LaurentPoly::monomial(1, 2));
        assert_eq!(decat_substitute(0, 1), LaurentPoly::monomial(-1, 2));
        assert_eq!(decat_substitute(1, 2), LaurentPoly::monomial(1, 5));
    }

    #[test]
    fn shifts_are_monomial() {
        let u = KhTable::from_entries([((0, 1), 1), ((0, -1), 1), ((3, 2), 4)]);
        let s = u.shifted(3, -2);
        assert_eq!(euler_char(&s), &euler_char(&u) * &decat_substitute(3, -2));
    }
}
