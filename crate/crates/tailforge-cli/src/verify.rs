//! The acceptance suite: one criterion per checkable claim, each made of
//! per-diagram items that pass, fail, or are skipped with a reason.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use tailforge::algebra::{circle_value, euler_char, LaurentPoly};
use tailforge::bstate::{adequacy_report, b_state, framing_relation_check};
use tailforge::corpus::{bundled, bundled_entry, CorpusEntry};
use tailforge::diagram::LinkDiagram;
use tailforge::jones::{
    colored_jones, kauffman_bracket, multicone_colored_jones, reduction_tail_check, shifted_colored_jones, tail_extract,
};
use tailforge::khovanov::{
    scan_table, shifted_homology, stabilization_front, tail_homology_estimate, twisted_diagram, verify_bounds,
    ScanOptions,
};
use tailforge::tl::{absorb_check, close_trace, jw_projector, tl_compose, TLMorphism, TLTangle, DEFAULT_CAP};
use tailforge::{Error, Result};

use crate::config::{RunConfig, Source};
use crate::run::load_entries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub subject: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub items: Vec<Item>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl Criterion {
    fn count(&self, s: Status) -> usize {
        self.items.iter().filter(|i| i.status == s).count()
    }

    /// One summary line, `PASS`/`FAIL`/`SKIPPED` first.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {} passed, {} failed, {} skipped ({:.2}s of {}s)",
            self.status.label(),
            self.id,
            self.name,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}

impl Summary {
    pub fn passes(&self) -> bool {
        self.criteria.iter().all(|c| c.status != Status::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub corpus: Vec<CorpusEntry>,
    /// Largest color for tails.
    pub n_max: u32,
    /// Largest twist depth for colored homology.
    pub twists: u32,
    pub tl_cap: u32,
    pub jobs: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { corpus: bundled(), n_max: 5, twists: 3, tl_cap: DEFAULT_CAP, jobs: None }
    }
}

const DEGENERATE: &str = "; certification degenerates to certified_degree <= 1/2";

fn item(subject: impl Into<String>, r: Result<(bool, String)>) -> Item {
    let (status, detail) = match r {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(Error::Resource(m)) => (Status::Skipped, format!("resource limit: {m}")),
        Err(e) => (Status::Fail, e.to_string()),
    };
    Item { subject: subject.into(), status, detail }
}

fn skipped(subject: impl Into<String>, why: impl Into<String>) -> Item {
    Item { subject: subject.into(), status: Status::Skipped, detail: why.into() }
}

fn criterion(id: u32, name: &'static str, budget_s: u64, run: impl FnOnce() -> Vec<Item>) -> Criterion {
    let t0 = Instant::now();
    let mut items = run();
    let elapsed = t0.elapsed();
    let budget = Duration::from_secs(budget_s);
    if elapsed > budget {
        items.push(Item {
            subject: "runtime".into(),
            status: Status::Fail,
            detail: format!("{:.1}s over the {budget_s}s budget", elapsed.as_secs_f64()),
        });
    }
    let status = if items.iter().any(|i| i.status == Status::Fail) {
        Status::Fail
    } else if items.iter().any(|i| i.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Skipped
    };
    Criterion { id, name, status, items, elapsed, budget }
}

fn fixed(name: &str) -> LinkDiagram {
    bundled_entry(name).expect("fixed diagram is bundled").diagram
}

/// `(-1)^(gN) q^(nN²/2 + gN) J_N` as a map from q-degree to coefficient.
fn normalized_series(d: &LinkDiagram, n: u32) -> Result<BTreeMap<i64, BigInt>> {
    let g = b_state(d).circles as u64;
    let sign = if (g * n as u64).is_multiple_of(2) { 1 } else { -1 };
    let s = shifted_colored_jones(d, n)?;
    Ok(s.terms().map(|(e, c)| (e / 2, c * sign)).collect())
}

fn coeff(s: &BTreeMap<i64, BigInt>, m: i64) -> BigInt {
    s.get(&m).cloned().unwrap_or_default()
}

fn euler_identity(cfg: &VerifyConfig) -> Vec<Item> {
    cfg.corpus
        .par_iter()
        .map(|e| {
            let d = &e.diagram;
            if d.n() > 8 {
                return skipped(&e.name, "more than 8 crossings");
            }
            item(&e.name, (|| {
                let t = scan_table(d, ScanOptions { check_dd: true })?;
                let b = kauffman_bracket(d)?;
                Ok((euler_char(&t) == b, format!("total rank {}, bracket {}", t.total_rank(), b.pretty())))
            })())
        })
        .collect()
}

/// `(-1)^N [N+1]` by the three-term recursion.
fn quantum_dim(n: u32) -> LaurentPoly {
    let d = circle_value();
    let (mut a, mut b) = (LaurentPoly::one(), d.clone());
    for _ in 0..n {
        let c = &(&d * &b) - &a;
        a = b;
        b = c;
    }
    a
}

fn projector_axioms(cfg: &VerifyConfig) -> Vec<Item> {
    let mut items = vec![];
    let one = |t: TLTangle| TLMorphism::from_tangle(t, tailforge::algebra::RatFunc::one());
    for a in 1..=cfg.tl_cap {
        items.push(item(format!("p{a}"), (|| {
            let p = jw_projector(a)?;
            let n = a as usize;
            let idem = tl_compose(&p, &p)? == *p;
            let mut kills = true;
            for i in 0..n.saturating_sub(1) {
                kills &= tl_compose(&p, &one(TLTangle::cap(n, i)))?.is_empty();
                kills &= tl_compose(&one(TLTangle::cup(n, i)), &p)?.is_empty();
            }
            let unit = p.coeff(&TLTangle::identity(n)).is_one();
            let trace = close_trace(&p)?.to_poly() == Some(quantum_dim(a));
            Ok((
                idem && kills && unit && trace,
                format!("{} terms; idempotent {idem}, kills turnbacks {kills}, unit {unit}, trace {trace}", p.len()),
            ))
        })()));
    }
    for a in 2..=cfg.tl_cap {
        for b in 1..a {
            items.push(item(format!("p{a} absorbs p{b}"), absorb_check(a, b).map(|ok| (ok, String::new()))));
        }
    }
    items
}

fn colored_cross_check(cfg: &VerifyConfig) -> Vec<Item> {
    let jobs: Vec<(&CorpusEntry, u32)> = cfg
        .corpus
        .iter()
        .flat_map(|e| (1..=4u32.min(cfg.tl_cap)).filter(move |n| (n * n) as usize * e.diagram.n() <= 20).map(move |n| (e, n)))
        .collect();
    jobs.par_iter()
        .map(|(e, n)| {
            item(format!("{} N={n}", e.name), (|| {
                let a = colored_jones(&e.diagram, *n)?.value;
                let b = multicone_colored_jones(&e.diagram, *n)?.value;
                Ok((a == b, format!("{} terms", a.len())))
            })())
        })
        .collect()
}

fn shift_membership(cfg: &VerifyConfig) -> Vec<Item> {
    let jobs: Vec<(&CorpusEntry, u32)> =
        cfg.corpus.iter().flat_map(|e| (1..=4u32.min(cfg.tl_cap)).map(move |n| (e, n))).collect();
    jobs.par_iter()
        .map(|(e, n)| {
            item(format!("{} N={n}", e.name), (|| {
                let s = shifted_colored_jones(&e.diagram, *n)?;
                Ok((s.in_q_squared(), format!("{} terms", s.len())))
            })())
        })
        .collect()
}

fn tail_stabilization(cfg: &VerifyConfig) -> Vec<Item> {
    let top = cfg.n_max.min(cfg.tl_cap.saturating_sub(1)).max(1);
    let mut items = vec![];
    for name in ["unknot", "trefoil-left"] {
        let d = fixed(name);
        let n = d.n() as i64;
        let series: Result<Vec<_>> = (1..=top + 1).map(|k| normalized_series(&d, k)).collect();
        let series = match series {
            Ok(s) => s,
            Err(e) => {
                items.push(item(name, Err(e)));
                continue;
            }
        };
        for k in 1..=top {
            let (a, b) = (&series[k as usize - 1], &series[k as usize]);
            let lo = a.keys().chain(b.keys()).copied().min().unwrap_or(0);
            let ms: Vec<i64> = (lo..).take_while(|m| 2 * m < k as i64 - n).collect();
            let subject = format!("{name} N={k} vs {}", k + 1);
            if ms.is_empty() {
                items.push(skipped(subject, format!("no degree below ({k} - {n})/2")));
                continue;
            }
            let bad: Vec<i64> = ms.iter().copied().filter(|&m| coeff(a, m) != coeff(b, m)).collect();
            items.push(item(subject, Ok((bad.is_empty(), format!("degrees {:?}; mismatches {bad:?}", ms)))));
        }
        let subject = format!("{name} tail");
        match tail_extract(&d, top, None) {
            Ok(t) if !t.certified && t.violations.is_empty() => {
                items.push(skipped(subject, format!("certified_degree {}/2 <= 1/2: nothing certified", t.certified_degree2)));
                continue;
            }
            Err(e) => {
                items.push(item(subject, Err(e)));
                continue;
            }
            Ok(_) => {}
        }
        items.push(item(format!("{name} tail"), (|| {
            let t = tail_extract(&d, top, None)?;
            let mut ok = t.violations.is_empty() && t.certified;
            let cd = t.certified_degree2;
            let mut detail = format!("certified_degree {cd}/2: {}", t.prefix_poly().pretty());
            if name == "unknot" {
                // 1 + q^2 + q^4 + ..., and the direct values at the top two colors agree
                for m in (0..).take_while(|m| 2 * m < cd) {
                    let want = BigInt::from(i64::from(m % 2 == 0));
                    ok &= coeff(&t.coeffs, m) == want;
                    ok &= coeff(&series[top as usize - 1], m) == want && coeff(&series[top as usize], m) == want;
                }
                if cd <= 1 {
                    detail.push_str(DEGENERATE);
                }
            }
            Ok((ok, detail))
        })()));
    }
    items
}

fn reduction_invariance(cfg: &VerifyConfig) -> Vec<Item> {
    cfg.corpus
        .par_iter()
        .map(|e| {
            let d = &e.diagram;
            if !adequacy_report(&b_state(d)).is_b_adequate {
                return skipped(&e.name, "B-inadequate; reduction needs an adequate diagram");
            }
            let common = cfg.n_max as i64 - d.n() as i64 - i64::from(d.n() > 0);
            if common <= 0 {
                return skipped(&e.name, format!("no certified prefix at N_max = {}", cfg.n_max));
            }
            item(&e.name, (|| {
                let r = reduction_tail_check(d, cfg.n_max)?;
                let detail = if r.agree {
                    format!("agree below degree {}/2: {}", r.common_degree2, r.tails[0].prefix_poly().pretty())
                } else {
                    r.mismatches.join("; ")
                };
                Ok((r.agree, detail))
            })())
        })
        .collect()
}

fn framing(cfg: &VerifyConfig) -> Vec<Item> {
    let jobs: Vec<(&CorpusEntry, usize)> =
        cfg.corpus.iter().flat_map(|e| (0..e.diagram.component_count()).map(move |c| (e, c))).collect();
    jobs.par_iter()
        .map(|(e, c)| {
            item(format!("{} component {c}", e.name), (|| {
                let d = &e.diagram;
                let k = d.add_kink(*c, -1)?;
                let f = framing_relation_check(d, &k);
                let rel = f.holds && (f.dn, f.dg, f.dphi) == (1, 1, -1);
                let mut jones = true;
                for n in 1..=3u32.min(cfg.tl_cap) {
                    jones &= normalized_series(d, n)? == normalized_series(&k, n)?;
                }
                let a = shifted_homology(&twisted_diagram(d, 1, 0)?)?;
                let b = shifted_homology(&twisted_diagram(&k, 1, 0)?)?;
                let kh = a.table == b.table;
                Ok((
                    rel && jones && kh,
                    format!("dn={} dg={} dphi={}; colored Jones {jones}; Khovanov {kh}", f.dn, f.dg, f.dphi),
                ))
            })())
        })
        .collect()
}

fn smfr_item(subject: String, d: &LinkDiagram, n: u32, k: u32) -> Item {
    item(subject, (|| {
        let r = shifted_homology(&twisted_diagram(d, n, k)?)?;
        let rep = verify_bounds(&r, d, None, None);
        let c = rep.check("smfr").expect("smfr is always checked");
        let lowest = r.table.min_i2().map(|i| i - r.shifts_applied.0);
        Ok((c.pass, format!("lowest unshifted h2 {lowest:?} against -{}", r.provenance.crossing_weight)))
    })())
}

fn lower_bound(cfg: &VerifyConfig) -> Vec<Item> {
    let mut items: Vec<Item> =
        cfg.corpus.par_iter().map(|e| smfr_item(e.name.clone(), &e.diagram, 1, 0)).collect();
    for name in ["unknot", "hopf-neg"] {
        for k in 2..=cfg.twists {
            items.push(smfr_item(format!("{name} N=2 k={k}"), &fixed(name), 2, k));
        }
    }
    items.push(smfr_item("trefoil-left N=2 k=2".into(), &fixed("trefoil-left"), 2, 2));
    items
}

fn colored_bounds(cfg: &VerifyConfig) -> Vec<Item> {
    let mut items = vec![];
    for name in ["unknot", "hopf-neg"] {
        let d = fixed(name);
        if cfg.twists < 2 {
            items.push(skipped(format!("{name} N=2"), "twist depth below 2"));
            continue;
        }
        let ks: Vec<u32> = (1..=cfg.twists).collect();
        let fr = match stabilization_front(&d, 2, &ks) {
            Ok(f) => f,
            Err(e) => {
                items.push(item(format!("{name} N=2"), Err(e)));
                continue;
            }
        };
        items.push(item(format!("{name} N=2 fronts"), Ok((fr.nondecreasing, format!("{:?}", fr.fronts)))));
        for k in 2..=cfg.twists {
            items.push(item(format!("{name} N=2 k={k}"), (|| {
                let r = shifted_homology(&twisted_diagram(&d, 2, k)?)?;
                let below = fr.front(k).flatten();
                let rep = verify_bounds(&r, &d, None, below);
                let mut ok = true;
                let mut notes = vec![];
                for b in ["bd1", "bd3", "bd4", "endi"] {
                    let c = rep.check(b).expect("bound is always listed");
                    ok &= c.applicable && c.pass;
                    notes.push(format!("{b} {}", if !c.applicable { "n/a" } else if c.pass { "ok" } else { "violated" }));
                }
                Ok((ok, format!("below h2 {below:?}: {}", notes.join(", "))))
            })()));
        }
    }
    let corpus: Vec<Item> = cfg
        .corpus
        .par_iter()
        .map(|e| {
            let d = &e.diagram;
            let subject = format!("{} N=1", e.name);
            let r = match twisted_diagram(d, 1, 0).and_then(|t| shifted_homology(&t)) {
                Ok(r) => r,
                Err(err) => return item(subject, Err(err)),
            };
            let rep = verify_bounds(&r, d, None, None);
            let failed: Vec<&str> =
                rep.checks.iter().filter(|c| c.applicable && !c.pass).map(|c| c.name.as_str()).collect();
            if !failed.is_empty() {
                return item(subject, Ok((false, format!("violated: {}", failed.join(", ")))));
            }
            if !rep.adequate {
                return skipped(subject, "B-inadequate; bd2, bd3, bd4 and endi are gated, the rest hold");
            }
            item(subject, Ok((true, "all bounds hold".into())))
        })
        .collect();
    items.extend(corpus);
    items
}

fn row_stability(cfg: &VerifyConfig) -> Vec<Item> {
    let mut items = vec![];
    let k = cfg.twists.clamp(1, 2);
    for name in ["unknot", "trefoil-left"] {
        let d = fixed(name);
        let est = match tail_homology_estimate(&d, &[1, 2], k) {
            Ok(e) => e,
            Err(e) => {
                items.push(item(name, Err(e)));
                continue;
            }
        };
        let rows_ok = est.certified && est.comparisons.iter().all(|c| c.agree);
        let dim00 = est.table.get(0, 0);
        items.push(item(
            format!("{name} N=1,2 k={k} rows"),
            Ok((
                rows_ok && dim00 == 1,
                format!("certified up to h2 {:?}; dim (0,0) = {dim00}", est.certified_max_i2),
            )),
        ));
        let subject = format!("{name} anti-diagonals");
        match tail_extract(&d, cfg.n_max.min(cfg.tl_cap), None) {
            Ok(tail) => {
                let ad = est.anti_diagonal_check(&tail);
                if ad.is_empty() {
                    items.push(skipped(subject, "no anti-diagonal inside both certified regions"));
                } else {
                    let desc: Vec<String> = ad.iter().map(|a| format!("m={}: {} vs {}", a.m, a.homology, a.tail)).collect();
                    items.push(item(subject, Ok((ad.iter().all(|a| a.agree), desc.join(", ")))));
                }
            }
            Err(e) => items.push(item(subject, Err(e))),
        }
    }
    items
}

/// Runs every criterion in order.
pub fn verify_all(cfg: &VerifyConfig) -> Summary {
    let body = || {
        vec![
            criterion(1, "Euler characteristic equals the bracket", 10, || euler_identity(cfg)),
            criterion(2, "projector axioms", 30, || projector_axioms(cfg)),
            criterion(3, "colored Jones by two methods", 120, || colored_cross_check(cfg)),
            criterion(4, "shifted colored Jones in Z[q^(±2)]", 60, || shift_membership(cfg)),
            criterion(5, "tail stabilization", 120, || tail_stabilization(cfg)),
            criterion(6, "tails survive B-reduction and strut doubling", 120, || reduction_invariance(cfg)),
            criterion(7, "framing relation and kink invariance", 60, || framing(cfg)),
            criterion(8, "lower homological bound", 10, || lower_bound(cfg)),
            criterion(9, "colored homology vanishing bounds", 600, || colored_bounds(cfg)),
            criterion(10, "row stability across colors", 900, || row_stability(cfg)),
        ]
    };
    let criteria = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(body),
        Err(_) => body(),
    };
    let mut s = Summary { criteria, passed: false };
    s.passed = s.passes();
    s
}

/// Human-readable report: one line per criterion, then any failed or
/// skipped items, and degenerate certifications, beneath it.
pub fn render(s: &Summary) -> String {
    let mut out = String::new();
    for c in &s.criteria {
        out.push_str(&c.line());
        out.push('\n');
        for i in c.items.iter().filter(|i| i.status != Status::Pass || i.detail.ends_with(DEGENERATE)) {
            out.push_str(&format!("    {} {}: {}\n", i.status.label(), i.subject, i.detail));
        }
    }
    out.push_str(if s.passes() { "all certified checks pass\n" } else { "some checks FAILED\n" });
    out
}

pub fn run_cli(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut bad_lines = false;
    let corpus = match &cfg.source {
        Source::Bundled => bundled(),
        _ => match load_entries(cfg, err) {
            Ok((entries, bad)) => {
                bad_lines = bad;
                entries
                    .into_iter()
                    .enumerate()
                    .map(|(i, e)| CorpusEntry { name: e.name, line: i + 1, source: e.diagram.render_pd(), diagram: e.diagram })
                    .collect()
            }
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                return 1;
            }
        },
    };
    if cfg.n_min.is_some() {
        let _ = writeln!(err, "note: --nmin is ignored by verify; every check uses n(D)");
    }
    let vc = VerifyConfig { corpus, n_max: cfg.n_max, twists: cfg.twists, tl_cap: cfg.tl_cap, jobs: cfg.jobs };
    let s = verify_all(&vc);
    let text = if cfg.json { serde_json::to_string(&s).expect("summary serializes") + "\n" } else { render(&s) };
    if out.write_all(text.as_bytes()).is_err() {
        return 1;
    }
    i32::from(!s.passes() || bad_lines)
}
