//! The full cube of resolutions over the rationals, used as the reference
//! construction, plus elimination and exact ranks on it.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{rank, Q64};
use super::scan::{Cx, Mor, Obj};
use crate::algebra::KhTable;
use crate::bstate::state_circles;
use crate::diagram::LinkDiagram;
use crate::{Error, Result};

pub const DEFAULT_CROSSING_LIMIT: usize = 20;
/// Hard cap on cube states before simplification.
pub const MAX_STATES: u64 = 1 << 20;
const MAX_GENERATORS: u64 = 1 << 23;

/// One basis vector: a resolution and a labelling of its circles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    /// Bit `x` set when crossing `x` is B-smoothed.
    pub state: u32,
    /// Bit `c` set when circle `c` carries the lower label.
    pub labels: u64,
    pub j: i64,
}

/// Bigraded complex over the rationals in (doubled h, q) grading. The
/// differential lowers the doubled h-degree by 2 and raises q by 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainComplex {
    pub crossings: usize,
    /// Circles of the all-B resolution.
    pub b_circles: usize,
    pub source: String,
    /// Generators grouped by doubled h-degree.
    pub objects: BTreeMap<i64, Vec<Generator>>,
    /// `i2 -> [(source index, target index in i2 - 2, coefficient)]`.
    pub differentials: BTreeMap<i64, Vec<(usize, usize, BigRational)>>,
}

impl ChainComplex {
    pub fn generator_count(&self) -> usize {
        self.objects.values().map(Vec::len).sum()
    }

    /// Whether every composite of two consecutive differentials vanishes.
    pub fn check_dd(&self) -> bool {
        for (&i2, first) in &self.differentials {
            let Some(second) = self.differentials.get(&(i2 - 2)) else { continue };
            let mut by_src: HashMap<usize, Vec<(usize, &BigRational)>> = HashMap::new();
            for (s, t, c) in second {
                by_src.entry(*s).or_default().push((*t, c));
            }
            let mut acc: HashMap<(usize, usize), BigRational> = HashMap::new();
            for (s, t, c) in first {
                for (u, c2) in by_src.get(t).map(Vec::as_slice).unwrap_or(&[]) {
                    *acc.entry((*s, *u)).or_insert_with(BigRational::zero) += c * *c2;
                }
            }
            if acc.values().any(|v| !v.is_zero()) {
                return false;
            }
        }
        true
    }

    /// Every nonzero entry must move the bidegree by (-2, +1).
    pub fn check_degrees(&self) -> bool {
        self.differentials.iter().all(|(i2, entries)| {
            let (Some(src), Some(tgt)) = (self.objects.get(i2), self.objects.get(&(i2 - 2))) else {
                return entries.is_empty();
            };
            entries.iter().all(|(s, t, _)| tgt[*t].j == src[*s].j + 1)
        })
    }
}

/// Builds the cube complex with the default crossing limit.
pub fn build_complex(d: &LinkDiagram) -> Result<ChainComplex> {
    build_complex_limited(d, DEFAULT_CROSSING_LIMIT)
}

pub fn build_complex_limited(d: &LinkDiagram, limit: usize) -> Result<ChainComplex> {
    let n = d.n();
    if n > limit || (1u64 << n.min(63)) > MAX_STATES {
        return Err(Error::Resource(format!("{n} crossings exceed the cube limit of {}", limit.min(20))));
    }
    let states = 1u32 << n;
    let mut circles: Vec<(Vec<usize>, usize)> = Vec::with_capacity(states as usize);
    let mut size: u64 = 0;
    for s in 0..states {
        let c = state_circles(d, |x| s >> x & 1 == 1);
        if c.1 > 63 {
            return Err(Error::Resource("too many circles in a resolution".into()));
        }
        size += 1 << c.1;
        if size > MAX_GENERATORS {
            return Err(Error::Resource(format!("cube complex exceeds {MAX_GENERATORS} generators")));
        }
        circles.push(c);
    }
    let i2_of = |s: u32| n as i64 - 2 * s.count_ones() as i64;
    let mut objects: BTreeMap<i64, Vec<Generator>> = BTreeMap::new();
    let mut index: HashMap<(u32, u64), usize> = HashMap::new();
    for s in 0..states {
        let total = circles[s as usize].1;
        let list = objects.entry(i2_of(s)).or_default();
        for labels in 0..(1u64 << total) {
            let p = total as i64 - 2 * labels.count_ones() as i64;
            index.insert((s, labels), list.len());
            list.push(Generator { state: s, labels, j: -p });
        }
    }
    let unknots = d.unknot_count();
    let mut differentials: BTreeMap<i64, Vec<(usize, usize, BigRational)>> = BTreeMap::new();
    for s in 0..states {
        let (cs, total) = &circles[s as usize];
        let local = total - unknots;
        for x in 0..n {
            if s >> x & 1 == 1 {
                continue;
            }
            let t = s | 1 << x;
            let (ct, total_t) = &circles[t as usize];
            let local_t = total_t - unknots;
            let sign = if (s & ((1 << x) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
            // image circle of every source circle, away from the crossing
            let mut image = vec![usize::MAX; *total];
            for h in 0..4 * n {
                image[cs[h]] = ct[h];
            }
            for u in 0..unknots {
                image[local + u] = local_t + u;
            }
            let (a, b) = (cs[4 * x], cs[4 * x + 2]);
            let list = differentials.entry(i2_of(s)).or_default();
            for labels in 0..(1u64 << total) {
                let src = index[&(s, labels)];
                let mut rest = 0u64;
                for c in 0..*total {
                    if c != a && c != b && labels >> c & 1 == 1 {
                        rest |= 1 << image[c];
                    }
                }
                let mut push = |l: u64| {
                    list.push((src, index[&(t, l)], BigRational::from_integer(sign.into())));
                };
                if a != b {
                    let m = ct[4 * x];
                    match (labels >> a & 1, labels >> b & 1) {
                        (0, 0) => push(rest),
                        (1, 1) => {}
                        _ => push(rest | 1 << m),
                    }
                } else {
                    let (a2, b2) = (ct[4 * x], ct[4 * x + 1]);
                    if labels >> a & 1 == 0 {
                        push(rest | 1 << b2);
                        push(rest | 1 << a2);
                    } else {
                        push(rest | 1 << a2 | 1 << b2);
                    }
                }
            }
        }
    }
    for list in differentials.values_mut() {
        list.sort_by_key(|x| (x.0, x.1));
    }
    let b_circles = circles[states as usize - 1].1;
    let c = ChainComplex { crossings: n, b_circles, source: d.render_pd(), objects, differentials };
    if !c.check_dd() {
        return Err(Error::Internal("cube differential does not square to zero".into()));
    }
    Ok(c)
}

/// Bigraded homology dimensions by exact rank computation.
pub fn homology_table(c: &ChainComplex) -> KhTable {
    // generators per (i2, block) where block = i2 + 2j is preserved by d
    let mut t = KhTable::new();
    let rank_of = |i2: i64| -> HashMap<i64, usize> {
        let mut rows: HashMap<i64, HashMap<usize, Vec<(usize, BigRational)>>> = HashMap::new();
        if let (Some(entries), Some(src)) = (c.differentials.get(&i2), c.objects.get(&i2)) {
            for (s, tg, v) in entries {
                let key = i2 + 2 * src[*s].j;
                rows.entry(key).or_default().entry(*s).or_default().push((*tg, v.clone()));
            }
        }
        rows.into_iter()
            .map(|(k, mut rs)| {
                let mut keys: Vec<usize> = rs.keys().copied().collect();
                keys.sort_unstable();
                let rows: Vec<Vec<(usize, BigRational)>> = keys.into_iter().map(|k| rs.remove(&k).unwrap()).collect();
                (k, exact_rank(rows))
            })
            .collect()
    };
    let ranks: HashMap<i64, HashMap<i64, usize>> = c.objects.keys().map(|&i2| (i2, rank_of(i2))).collect();
    for (&i2, gens) in &c.objects {
        let mut count: BTreeMap<i64, usize> = BTreeMap::new();
        for g in gens {
            *count.entry(g.j).or_default() += 1;
        }
        for (j, k) in count {
            let block = i2 + 2 * j;
            let out = ranks.get(&i2).and_then(|m| m.get(&block)).copied().unwrap_or(0);
            let inn = ranks.get(&(i2 + 2)).and_then(|m| m.get(&block)).copied().unwrap_or(0);
            t.add(i2, j, (k - out - inn) as u64);
        }
    }
    t
}

/// Rank over the rationals, trying checked `i64` arithmetic first.
fn exact_rank(rows: Vec<Vec<(usize, BigRational)>>) -> usize {
    use num_traits::ToPrimitive;
    let small: Option<Vec<Vec<(usize, Q64)>>> = rows
        .iter()
        .map(|r| r.iter().map(|(c, v)| Some((*c, Q64::new(v.numer().to_i64()?, v.denom().to_i64()?)))).collect())
        .collect();
    small.and_then(rank).unwrap_or_else(|| rank(rows).expect("big rationals never overflow"))
}

/// Gaussian elimination on the cube complex: repeatedly cancels an invertible
/// entry, visiting sources by lowest doubled h-degree, then lowest index.
pub fn simplify_scan(c: &ChainComplex) -> ChainComplex {
    let n = c.crossings as i64;
    let mut cx: Cx<BigRational> = Cx::new(0);
    let m0 = cx.intern(vec![]);
    let mut ids: HashMap<(i64, usize), usize> = HashMap::new();
    let mut back: Vec<(i64, usize)> = vec![];
    for (&i2, gens) in &c.objects {
        let r = ((n - i2) / 2) as i32;
        for (k, g) in gens.iter().enumerate() {
            let id = cx.push(Obj { m: m0, r, q: r - g.j as i32 });
            ids.insert((i2, k), id);
            back.push((i2, k));
        }
    }
    for (&i2, entries) in &c.differentials {
        for (s, t, v) in entries {
            let (a, b) = (ids[&(i2, *s)], ids[&(i2 - 2, *t)]);
            let cur = cx.out[a].get(&b).map(|m| m.scalar_part()).unwrap_or_else(BigRational::zero);
            cx.set(a, b, Mor::scalar(cur + v));
        }
    }
    let order: Vec<usize> = (0..back.len()).collect();
    cx.reduce(&order).expect("big rationals never overflow").expect("scalar complexes need no gluing");
    let mut objects: BTreeMap<i64, Vec<Generator>> = BTreeMap::new();
    let mut new_index: HashMap<usize, usize> = HashMap::new();
    for id in cx.live() {
        let (i2, k) = back[id];
        let list = objects.entry(i2).or_default();
        new_index.insert(id, list.len());
        list.push(c.objects[&i2][k].clone());
    }
    let mut differentials: BTreeMap<i64, Vec<(usize, usize, BigRational)>> = BTreeMap::new();
    for id in cx.live().collect::<Vec<_>>() {
        for (t, f) in &cx.out[id] {
            let v = f.scalar_part();
            if !v.is_zero() {
                differentials.entry(back[id].0).or_default().push((new_index[&id], new_index[t], v));
            }
        }
    }
    let out = ChainComplex { crossings: c.crossings, b_circles: c.b_circles, source: c.source.clone(), objects, differentials };
    debug_assert!(out.check_dd());
    out
}

