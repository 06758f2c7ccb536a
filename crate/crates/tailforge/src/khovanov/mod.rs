//! Khovanov homology over the rationals.
//!
//! Gradings: a table entry `(i2, j)` sits in h-degree `i2 / 2` and q-degree
//! `j`. Internally a generator of the cube lives at `r` B-smoothings with the
//! usual quantum grading `Q`; it is placed at `i2 = n - 2r`, `j = r - Q`.
//! This puts the unknot at `(0, ±1)` and makes `Σ (-1)^j q^(i+j) dim` equal
//! the bracket with circle value `-(q + q^-1)`.

mod bounds;
mod colored;
mod cube;
mod field;
mod scan;

#[cfg(test)]
mod tests;

pub use bounds::{verify_bounds, BoundCheck, BoundReport};
pub use colored::{
    crossing_vs_projector_check, first_difference, insert_twist_projector, shifted_homology, stabilization_front,
    tail_homology_estimate, twisted_diagram, AntiDiagonal, CrossingProjectorReport, FrontReport,
    RowComparison, TailHomology, TwistedDiagram,
};
pub use cube::{
    build_complex, build_complex_limited, homology_table, simplify_scan, ChainComplex, Generator,
    DEFAULT_CROSSING_LIMIT, MAX_STATES,
};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::KhTable;
use crate::bstate::b_state;
use crate::diagram::LinkDiagram;
use crate::Result;

use field::Q64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub diagram: String,
    pub color: u32,
    /// Twist depth standing in for each projector; 0 when none was needed.
    pub twist_depth: u32,
    pub method: String,
    /// Single-strand crossings of the diagram whose complex was computed.
    pub crossing_weight: i64,
    /// Circles of its all-B state.
    pub circle_weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhResult {
    pub table: KhTable,
    /// `(h2, q)`: the table was shifted by `h^(h2/2) q^q`.
    pub shifts_applied: (i64, i64),
    pub provenance: Provenance,
}

impl KhResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "table": self.table.to_json(),
            "shifts": [self.shifts_applied.0, self.shifts_applied.1],
            "provenance": self.provenance,
        })
    }
}

/// Homology of a cube complex.
pub fn homology(c: &ChainComplex) -> KhResult {
    KhResult {
        table: homology_table(c),
        shifts_applied: (0, 0),
        provenance: Provenance {
            diagram: c.source.clone(),
            color: 1,
            twist_depth: 0,
            method: "cube".into(),
            crossing_weight: c.crossings as i64,
            circle_weight: c.b_circles as i64,
        },
    }
}

/// Options for the scanning computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct ScanOptions {
    /// Verify `d∘d = 0` after every crossing.
    pub check_dd: bool,
}


fn unknot_table() -> KhTable {
    KhTable::from_entries([((0, 1), 1), ((0, -1), 1)])
}

/// Homology table by tangle scanning with delooping and elimination.
pub fn scan_table(d: &LinkDiagram, opts: ScanOptions) -> Result<KhTable> {
    let gens = match scan::scan_generators::<Q64>(d, opts.check_dd) {
        Some(r) => r?,
        None => scan::scan_generators::<BigRational>(d, opts.check_dd)
            .expect("big rationals never overflow")?,
    };
    let n = d.n() as i64;
    let mut t = KhTable::from_entries(gens.into_iter().map(|(r, q)| ((n - 2 * r as i64, (r - q) as i64), 1)));
    for _ in 0..d.unknot_count() {
        t = t.tensor(&unknot_table());
    }
    Ok(t)
}

/// Khovanov homology of a diagram, unshifted.
pub fn kh_homology(d: &LinkDiagram) -> Result<KhResult> {
    Ok(KhResult {
        table: scan_table(d, ScanOptions::default())?,
        shifts_applied: (0, 0),
        provenance: Provenance {
            diagram: d.render_pd(),
            color: 1,
            twist_depth: 0,
            method: "scan".into(),
            crossing_weight: d.n() as i64,
            circle_weight: b_state(d).circles as i64,
        },
    })
}
