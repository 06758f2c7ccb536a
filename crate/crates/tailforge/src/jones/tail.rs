use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::shifted_colored_jones;
use crate::algebra::TailSeries;
use crate::bstate::{adequacy_report, b_reduce, b_state};
use crate::diagram::LinkDiagram;
use crate::Result;

/// Stable tail from colors `1..=n_max`. A coefficient of `q^m` is certified
/// when every color `N` with `2m < N - n_used` gives the same value; the
/// boundary degree itself is never certified.
pub fn tail_extract(d: &LinkDiagram, n_max: u32, n_min: Option<usize>) -> Result<TailSeries> {
    let g = b_state(d);
    let adequate = adequacy_report(&g).is_b_adequate;
    let n_used = n_min.unwrap_or(d.n()) as i64;
    let mut notes = vec![];
    if n_min.is_none() {
        notes.push(format!("no minimal crossing number given; using n(D) = {n_used}"));
    }
    if !adequate {
        notes.push("diagram is not B-adequate; nothing is certified".into());
    }
    let mut series: Vec<BTreeMap<i64, BigInt>> = vec![];
    let mut signs = vec![];
    for n in 1..=n_max {
        let sign = if (g.circles as u64 * n as u64).is_multiple_of(2) { 1 } else { -1 };
        signs.push((n, sign));
        let s = shifted_colored_jones(d, n)?;
        series.push(s.terms().map(|(e, c)| (e / 2, c * sign)).collect());
    }
    let certified_degree2 = n_max as i64 - n_used;
    let mut coeffs = BTreeMap::new();
    let mut violations = vec![];
    if adequate && !series.is_empty() {
        let lo = series.iter().filter_map(|s| s.keys().next().copied()).min().unwrap_or(0);
        let mut m = lo;
        while 2 * m < certified_degree2 {
            let mut value: Option<BigInt> = None;
            for (idx, s) in series.iter().enumerate() {
                let n = idx as i64 + 1;
                if 2 * m >= n - n_used {
                    continue;
                }
                let c = s.get(&m).cloned().unwrap_or_else(BigInt::zero);
                match &value {
                    None => value = Some(c),
                    Some(v) if *v != c => {
                        violations.push(format!("coefficient of q^{m} changes at color {n}: {v} -> {c}"));
                    }
                    _ => {}
                }
            }
            if let Some(v) = value {
                if !v.is_zero() {
                    coeffs.insert(m, v);
                }
            }
            m += 1;
        }
    }
    Ok(TailSeries {
        coeffs,
        certified_degree2,
        sign_normalization: signs,
        certified: adequate && violations.is_empty() && certified_degree2 > 0,
        n_used,
        n_max,
        violations,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCheck {
    pub labels: Vec<String>,
    pub tails: Vec<TailSeries>,
    /// Twice the degree below which all prefixes are compared.
    pub common_degree2: i64,
    pub agree: bool,
    pub mismatches: Vec<String>,
}

/// Compares the tails of `d`, its B-reduction, and `d` with crossing 0 strut-doubled.
pub fn reduction_tail_check(d: &LinkDiagram, n_max: u32) -> Result<TailCheck> {
    let (reduced, _) = b_reduce(d)?;
    let mut variants = vec![("diagram".to_string(), d.clone()), ("b-reduced".to_string(), reduced)];
    if d.n() > 0 {
        variants.push(("strut-doubled".to_string(), d.strut_double(0)));
    }
    let mut tails = vec![];
    for (_, v) in &variants {
        tails.push(tail_extract(v, n_max, None)?);
    }
    compare_tails(variants.into_iter().map(|v| v.0).collect(), tails)
}

pub(crate) fn compare_tails(labels: Vec<String>, tails: Vec<TailSeries>) -> Result<TailCheck> {
    let common = tails.iter().map(|t| t.certified_degree2).min().unwrap_or(0);
    let mut mismatches = vec![];
    for (i, t) in tails.iter().enumerate().skip(1) {
        let keys: std::collections::BTreeSet<i64> =
            tails[0].coeffs.keys().chain(t.coeffs.keys()).copied().filter(|m| 2 * m < common).collect();
        for m in keys {
            let a = tails[0].coeffs.get(&m).cloned().unwrap_or_default();
            let b = t.coeffs.get(&m).cloned().unwrap_or_default();
            if a != b {
                mismatches.push(format!("{} vs {}: q^{m} has {a} vs {b}", labels[0], labels[i]));
            }
        }
    }
    let agree = mismatches.is_empty() && tails.iter().all(|t| t.violations.is_empty());
    Ok(TailCheck { labels, tails, common_degree2: common, agree, mismatches })
}
