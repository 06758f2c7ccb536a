//! Colored homology with projectors replaced by negative twists, shifted
//! gradings, stabilization fronts and the row-stability comparisons.
//!
//! A negative kink on a component, once the component is N-cabled, is a
//! negative full twist of the cable (up to framing of the single strands).
//! Each one contributes `N²` crossings and `N` B-circles, so the shifted
//! grading `h^(N² n / 2) q^(N g)` of the twisted diagram already carries the
//! compensating monomial `h^(N²/2) q^N` per twist.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{scan_table, KhResult, Provenance, ScanOptions};
use crate::algebra::{euler_char, KhTable, TailSeries};
use crate::bstate::b_state;
use crate::diagram::LinkDiagram;
use crate::{Error, Result};

/// Largest cabled diagram handed to the scanner.
pub const MAX_CABLED_CROSSINGS: usize = 400;

/// A diagram whose projectors are approximated by kinks that become full
/// twists after cabling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedDiagram {
    pub original: LinkDiagram,
    /// Uncabled diagram with the kinks inserted.
    pub base: LinkDiagram,
    pub color: u32,
    /// Kinks inserted so far, over all components.
    pub kinks: u32,
    /// Deepest twist count used on any component.
    pub depth: u32,
}

impl TwistedDiagram {
    pub fn new(d: &LinkDiagram, color: u32) -> Result<Self> {
        if color == 0 {
            return Err(Error::Domain("color must be at least 1".into()));
        }
        Ok(TwistedDiagram { original: d.clone(), base: d.clone(), color, kinks: 0, depth: 0 })
    }

    /// Adds `k` negative full twists on component `comp` of the current base.
    pub fn with_twists(&self, comp: usize, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("twist depth must be at least 1".into()));
        }
        let mut base = self.base.clone();
        let mut c = comp;
        for _ in 0..k {
            base = base.add_kink(c, -1)?;
            // a kinked crossing-free circle changes its index; follow the new crossing
            let x = base.n() - 1;
            c = base.components().iter().position(|cp| cp.passages.iter().any(|p| p.0 == x)).unwrap();
        }
        let cabled = (self.color as usize).pow(2) * base.n();
        if cabled > MAX_CABLED_CROSSINGS {
            return Err(Error::Resource(format!("{cabled} cabled crossings exceed {MAX_CABLED_CROSSINGS}")));
        }
        Ok(TwistedDiagram {
            original: self.original.clone(),
            base,
            color: self.color,
            kinks: self.kinks + k,
            depth: self.depth.max(k),
        })
    }

    pub fn cabled(&self) -> LinkDiagram {
        self.base.cable(self.color)
    }

    /// Crossings of the cabled diagram, `N² n(base)`.
    pub fn crossing_weight(&self) -> i64 {
        (self.color as i64).pow(2) * self.base.n() as i64
    }

    /// B-circles of the cabled diagram with projectors read as identities, `N g(base)`.
    pub fn circle_weight(&self) -> i64 {
        self.color as i64 * b_state(&self.base).circles as i64
    }

    /// `(h2, q)` monomial carried by the inserted twists.
    pub fn compensation(&self) -> (i64, i64) {
        let n = self.color as i64;
        (self.kinks as i64 * n * n, self.kinks as i64 * n)
    }
}

/// Replaces the projector on component `comp` of the N-cable of `d` by `k`
/// negative full twists.
pub fn insert_twist_projector(d: &LinkDiagram, comp: usize, n: u32, k: u32) -> Result<TwistedDiagram> {
    TwistedDiagram::new(d, n)?.with_twists(comp, k)
}

/// Every component gets `k` twists; `k = 0` leaves the bare cable.
pub fn twisted_diagram(d: &LinkDiagram, n: u32, k: u32) -> Result<TwistedDiagram> {
    let mut t = TwistedDiagram::new(d, n)?;
    if k == 0 {
        return Ok(t);
    }
    // crossing components keep their indices; crossing-free circles are
    // always the trailing indices and the first one moves into place once kinked
    let with_crossings = d.components().len();
    for c in 0..with_crossings {
        t = t.with_twists(c, k)?;
    }
    for u in 0..d.unknot_count() {
        t = t.with_twists(with_crossings + u, k)?;
    }
    Ok(t)
}

/// Homology of the cabled diagram shifted by `(N² n(base), N g(base))`.
pub fn shifted_homology(t: &TwistedDiagram) -> Result<KhResult> {
    let cabled = t.cabled();
    let table = scan_table(&cabled, ScanOptions::default())?;
    let shift = (t.crossing_weight(), t.circle_weight());
    Ok(KhResult {
        table: table.shifted(shift.0, shift.1),
        shifts_applied: shift,
        provenance: Provenance {
            diagram: t.original.render_pd(),
            color: t.color,
            twist_depth: t.depth,
            method: if t.color == 1 || t.depth == 0 { "scan".into() } else { "scan+twist".into() },
            crossing_weight: t.crossing_weight(),
            circle_weight: t.circle_weight(),
        },
    })
}

/// Lowest doubled h-degree where two tables differ.
pub fn first_difference(a: &KhTable, b: &KhTable) -> Option<i64> {
    let mut rows: Vec<i64> = a.rows();
    rows.extend(b.rows());
    rows.sort_unstable();
    rows.dedup();
    rows.into_iter().find(|&i2| a.row(i2) != b.row(i2))
}

fn restrict(t: &KhTable, max_i2: i64) -> KhTable {
    KhTable::from_entries(t.entries().filter(|((i2, _), _)| *i2 <= max_i2))
}

/// `a < b` with `None` read as infinity.
fn front_min(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontReport {
    pub color: u32,
    /// Shifted table for each twist depth computed, `0` included.
    pub tables: BTreeMap<u32, KhTable>,
    /// For each requested `k`: lowest doubled h-degree where depth `k`
    /// differs from `k - 1`; `None` when the tables agree everywhere.
    pub fronts: Vec<(u32, Option<i64>)>,
    pub nondecreasing: bool,
}

impl FrontReport {
    pub fn front(&self, k: u32) -> Option<Option<i64>> {
        self.fronts.iter().find(|f| f.0 == k).map(|f| f.1)
    }
}

fn fronts_of(color: u32, ks: &[u32], mut table: impl FnMut(u32) -> Result<KhTable>) -> Result<FrontReport> {
    let mut tables = BTreeMap::new();
    let mut fronts = vec![];
    for &k in ks {
        if k == 0 {
            return Err(Error::Domain("fronts need twist depth at least 1".into()));
        }
        for kk in [k - 1, k] {
            if let std::collections::btree_map::Entry::Vacant(e) = tables.entry(kk) {
                e.insert(table(kk)?);
            }
        }
        fronts.push((k, first_difference(&tables[&(k - 1)], &tables[&k])));
    }
    let key = |f: Option<i64>| f.unwrap_or(i64::MAX);
    let mut sorted = fronts.clone();
    sorted.sort_by_key(|f| f.0);
    let nondecreasing = sorted.windows(2).all(|w| key(w[0].1) <= key(w[1].1));
    Ok(FrontReport { color, tables, fronts, nondecreasing })
}

/// Shifted tables at color `n` for every depth in `ks` and `k - 1`, with the
/// measured fronts.
pub fn stabilization_front(d: &LinkDiagram, n: u32, ks: &[u32]) -> Result<FrontReport> {
    fronts_of(n, ks, |k| Ok(shifted_homology(&twisted_diagram(d, n, k)?)?.table))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowComparison {
    pub color: u32,
    pub next: u32,
    /// Rows with doubled h-degree up to this were compared; `None` if none could be.
    pub max_i2: Option<i64>,
    pub agree: bool,
    pub mismatched_rows: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiDiagonal {
    pub m: i64,
    pub homology: BigInt,
    pub tail: BigInt,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailHomology {
    /// Common rows of the compared tables.
    pub table: KhTable,
    /// Highest certified doubled h-degree.
    pub certified_max_i2: Option<i64>,
    pub certified: bool,
    pub comparisons: Vec<RowComparison>,
    pub fronts: Vec<FrontReport>,
    pub notes: Vec<String>,
}

/// Compares shifted tables of consecutive colors on rows `i <= N - 1` that
/// lie below both twist fronts, and keeps the agreeing rows.
pub fn tail_homology_estimate(d: &LinkDiagram, colors: &[u32], k: u32) -> Result<TailHomology> {
    let mut fronts = vec![];
    for &n in colors {
        fronts.push(stabilization_front(d, n, &[k])?);
    }
    let mut comparisons = vec![];
    let mut notes = vec![];
    let mut best: Option<(i64, KhTable)> = None;
    if colors.len() < 2 {
        notes.push("no comparison possible with a single color".into());
    }
    for w in 0..colors.len().saturating_sub(1) {
        let (a, b) = (&fronts[w], &fronts[w + 1]);
        let (na, nb) = (colors[w], colors[w + 1]);
        let front = front_min(a.front(k).flatten(), b.front(k).flatten());
        let mut max_i2 = 2 * na as i64 - 2;
        if let Some(f) = front {
            max_i2 = max_i2.min(f - 1);
        }
        let (ta, tb) = (&a.tables[&k], &b.tables[&k]);
        let lo = ta.rows().first().copied().unwrap_or(0).min(tb.rows().first().copied().unwrap_or(0)).min(0);
        let mismatched: Vec<i64> = (lo..=max_i2).filter(|&i2| ta.row(i2) != tb.row(i2)).collect();
        let agree = mismatched.is_empty() && max_i2 >= lo;
        if max_i2 < lo {
            notes.push(format!("colors {na},{nb}: fronts leave no row to compare"));
        }
        comparisons.push(RowComparison {
            color: na,
            next: nb,
            max_i2: (max_i2 >= lo).then_some(max_i2),
            agree,
            mismatched_rows: mismatched,
        });
        if agree && best.as_ref().is_none_or(|(m, _)| max_i2 >= *m) {
            best = Some((max_i2, restrict(tb, max_i2)));
        }
    }
    let certified = best.is_some() && comparisons.iter().all(|c| c.agree);
    let (certified_max_i2, table) = match best {
        Some((m, t)) => (Some(m), t),
        None => (None, fronts.last().map(|f| f.tables[&k].clone()).unwrap_or_default()),
    };
    Ok(TailHomology { table, certified_max_i2, certified, comparisons, fronts, notes })
}

impl TailHomology {
    /// Compares the graded Euler characteristic of the certified rows with a
    /// tail series on every anti-diagonal `i + j = m` that the vanishing
    /// bounds confine to those rows: `m <= 0`, or `4m + 2 n_used <= max_i2`.
    pub fn anti_diagonal_check(&self, tail: &TailSeries) -> Vec<AntiDiagonal> {
        let Some(max_i2) = self.certified_max_i2 else { return vec![] };
        let e = euler_char(&self.table);
        let mut ms: Vec<i64> = tail.coeffs.keys().copied().collect();
        ms.extend(e.terms().filter(|(e2, _)| e2 % 2 == 0).map(|(e2, _)| e2 / 2));
        ms.push(0);
        ms.sort_unstable();
        ms.dedup();
        ms.into_iter()
            .filter(|&m| 2 * m < tail.certified_degree2 && (m <= 0 || 4 * m + 2 * tail.n_used <= max_i2))
            .map(|m| {
                let h = e.coeff(2 * m);
                let t = tail.coeffs.get(&m).cloned().unwrap_or_else(BigInt::zero);
                AntiDiagonal { m, agree: h == t, homology: h, tail: t }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingProjectorReport {
    pub crossing: usize,
    pub color: u32,
    pub twists: u32,
    /// Rows `i2 <= 4N - 4` below both fronts.
    pub compared_max_i2: Option<i64>,
    pub front_crossing: Option<i64>,
    pub front_projector: Option<i64>,
    pub agree: bool,
    pub mismatched_rows: Vec<i64>,
    /// Differing rows outside the certified range; not failures.
    pub uncertified_rows: Vec<i64>,
    pub crossing_table: KhTable,
    pub projector_table: KhTable,
}

/// The crossing `x` replaced by a projector on its two B-parallel strands;
/// that projector is approximated by `2k` crossings whose B-smoothings run
/// parallel, i.e. `k` negative full twists of the pair.
fn projector_slot(d: &LinkDiagram, x: usize, k: u32) -> LinkDiagram {
    if k == 0 {
        return d.b_splice(x);
    }
    let mut out = d.clone();
    for _ in 1..2 * k {
        out = out.strut_double(x);
    }
    out
}

/// Shifted homology with the crossing `x` kept versus replaced by a projector
/// on the 2N parallel strands, compared on rows `i <= 2N - 2`.
pub fn crossing_vs_projector_check(d: &LinkDiagram, x: usize, n: u32, k: u32) -> Result<CrossingProjectorReport> {
    if x >= d.n() {
        return Err(Error::Domain(format!("crossing {x} out of range")));
    }
    if k == 0 {
        return Err(Error::Domain("twist depth must be at least 1".into()));
    }
    let fd = stabilization_front(d, n, &[k])?;
    let fp = fronts_of(n, &[k], |kk| {
        let slot = projector_slot(d, x, kk);
        Ok(shifted_homology(&twisted_diagram(&slot, n, kk)?)?.table)
    })?;
    let (front_crossing, front_projector) = (fd.front(k).flatten(), fp.front(k).flatten());
    let mut max_i2 = 4 * n as i64 - 4;
    if let Some(f) = front_min(front_crossing, front_projector) {
        max_i2 = max_i2.min(f - 1);
    }
    let (ta, tb) = (fd.tables[&k].clone(), fp.tables[&k].clone());
    let mut rows: Vec<i64> = ta.rows();
    rows.extend(tb.rows());
    rows.push(0);
    rows.sort_unstable();
    rows.dedup();
    let lo = rows[0];
    let differing: Vec<i64> = rows.into_iter().filter(|&i2| ta.row(i2) != tb.row(i2)).collect();
    let (mismatched_rows, uncertified_rows): (Vec<i64>, Vec<i64>) = differing.into_iter().partition(|&i2| i2 <= max_i2);
    Ok(CrossingProjectorReport {
        crossing: x,
        color: n,
        twists: k,
        compared_max_i2: (max_i2 >= lo).then_some(max_i2),
        front_crossing,
        front_projector,
        agree: mismatched_rows.is_empty(),
        mismatched_rows,
        uncertified_rows,
        crossing_table: ta,
        projector_table: tb,
    })
}
