//! Vanishing bounds for shifted homology tables.

use serde::{Deserialize, Serialize};

use super::KhResult;
use crate::bstate::{adequacy_report, b_state};
use crate::diagram::LinkDiagram;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    /// False when the bound needs a B-adequate diagram and this one is not.
    pub applicable: bool,
    pub pass: bool,
    /// Offending cells `(i2, j)`.
    pub violations: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub n_used: i64,
    pub adequate: bool,
    /// Only rows with doubled h-degree below this were inspected.
    pub below_i2: Option<i64>,
}

impl BoundReport {
    /// Every applicable bound holds.
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| !c.applicable || c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Scans a shifted table of the diagram `d` (uncabled, as drawn before any
/// twist insertion) against the vanishing bounds. `n_used` defaults to the
/// crossing number of `d`; `below_i2` restricts the scan to rows under a
/// stabilization front.
pub fn verify_bounds(r: &KhResult, d: &LinkDiagram, n_used: Option<i64>, below_i2: Option<i64>) -> BoundReport {
    let rep = adequacy_report(&b_state(d));
    let n = d.n() as i64;
    let ni = rep.n_inadequate as i64;
    let n_used = n_used.unwrap_or(n);
    let cells: Vec<((i64, i64), u64)> =
        r.table.entries().filter(|((i2, _), _)| below_i2.is_none_or(|b| *i2 < b)).collect();
    let scan = |name: &str, applicable: bool, bad: &dyn Fn(i64, i64) -> bool| {
        let violations: Vec<(i64, i64)> = cells.iter().filter(|((i, j), _)| bad(*i, *j)).map(|(c, _)| *c).collect();
        BoundCheck { name: name.into(), applicable, pass: violations.is_empty(), violations }
    };
    let adequate = rep.is_b_adequate;
    let unshift = r.shifts_applied.0;
    let n_hat = r.provenance.crossing_weight;
    let mut checks = vec![
        scan("bd1", true, &|i, _| i < 0),
        scan("bd2", adequate, &|i, j| 4 * j < -i - 2 * n_used),
        scan("bd3", adequate, &|i, j| 2 * j < -i),
        scan("bd4", adequate, &|i, j| 2 * j == -i && i != 0),
        scan("bd2a", true, &|i, j| 4 * j < -i - 2 * n - 6 * ni),
        scan("bd3a", true, &|i, j| 2 * j < -i - 2 * ni),
        scan("smfr", true, &|i, _| i - unshift < -n_hat),
    ];
    let row0_visible = below_i2.is_none_or(|b| b > 0);
    let dim00 = r.table.get(0, 0);
    checks.push(BoundCheck {
        name: "endi".into(),
        applicable: adequate && row0_visible,
        pass: dim00 == 1,
        violations: if dim00 == 1 { vec![] } else { vec![(0, 0)] },
    });
    BoundReport { checks, n_used, adequate, below_i2 }
}
