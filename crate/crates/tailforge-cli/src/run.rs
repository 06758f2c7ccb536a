//! Per-diagram commands over a single diagram or a corpus.

use std::io::Write;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};
use tailforge::algebra::{KhTable, LaurentPoly};
use tailforge::bstate::{adequacy_report, b_reduce, b_state};
use tailforge::corpus::{bundled, bundled_entry, parse_corpus, parse_diagram};
use tailforge::diagram::LinkDiagram;
use tailforge::jones::{colored_jones, kauffman_bracket, tail_extract};
use tailforge::khovanov::{shifted_homology, stabilization_front, twisted_diagram, verify_bounds};
use tailforge::{Error, Result};

use crate::cache::{key_material, Cache};
use crate::config::{Command, RunConfig, Source};

pub struct Entry {
    pub name: String,
    pub diagram: LinkDiagram,
}

fn int_json(c: &BigInt) -> Value {
    i64::try_from(c).map(Value::from).unwrap_or_else(|_| Value::from(c.to_string()))
}

fn half(k2: i64) -> String {
    if k2 % 2 == 0 { format!("{}", k2 / 2) } else { format!("{k2}/2") }
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Parse { .. } => "parse",
        Error::Domain(_) => "domain",
        Error::Resource(_) => "resource",
        Error::Internal(_) => "internal",
    };
    json!({ "kind": kind, "message": e.to_string() })
}

/// Parameters that influence a command's result; part of the cache key.
pub fn params(cmd: Command, color: u32, cfg: &RunConfig) -> Value {
    match cmd {
        Command::Parse => json!({ "nmin": cfg.n_min }),
        Command::Bstate | Command::Jones | Command::Verify => json!({}),
        Command::Cjones => json!({ "color": color }),
        Command::Tail => json!({ "nmax": cfg.n_max, "nmin": cfg.n_min }),
        Command::Kh => json!({
            "color": color,
            "twists": if color == 1 { 0 } else { cfg.twists },
            "bounds": cfg.verify_bounds,
            "nmin": cfg.n_min,
        }),
    }
}

fn sign_for(g: usize, n: u32) -> i64 {
    if (g as u64 * n as u64).is_multiple_of(2) { 1 } else { -1 }
}

pub fn compute(cmd: Command, d: &LinkDiagram, color: u32, cfg: &RunConfig) -> Result<Value> {
    match cmd {
        Command::Parse => {
            let mut st = d.stats();
            st.user_n_min = cfg.n_min;
            let mut notes = vec![];
            if cfg.n_min.is_none() {
                notes.push(format!("no minimal crossing number given; n(D) = {} stands in for it", d.n()));
            }
            Ok(json!({
                "pd": d.render_pd(),
                "stats": st,
                "unknots": d.unknot_count(),
                "notes": notes,
            }))
        }
        Command::Bstate => {
            let g = b_state(d);
            let rep = adequacy_report(&g);
            let reduced = if rep.is_b_adequate {
                let (r, log) = b_reduce(d)?;
                let rg = b_state(&r);
                json!({ "pd": r.render_pd(), "g": rg.circles, "struts": rg.struts.len(), "steps": log })
            } else {
                Value::Null
            };
            Ok(json!({
                "g": g.circles,
                "n": d.n(),
                "n_inadequate": rep.n_inadequate,
                "adequate": rep.is_b_adequate,
                "struts": g.struts,
                "reduced": reduced,
            }))
        }
        Command::Jones => {
            let b = kauffman_bracket(d)?;
            Ok(json!({ "method": "tl-contraction", "bracket": b.to_json(), "text": b.pretty() }))
        }
        Command::Cjones => {
            if color > cfg.tl_cap {
                return Err(Error::Resource(format!("color {color} above --tl-cap {}", cfg.tl_cap)));
            }
            let ev = colored_jones(d, color)?;
            let g = b_state(d).circles;
            let n2 = color as i64 * color as i64;
            let shift = (d.n() as i64 * n2, g as i64 * color as i64);
            let shifted = ev.value.shift(shift.0 + 2 * shift.1);
            if !shifted.in_q_squared() {
                return Err(Error::Internal(format!("shifted value {} is not in Z[q^(±2)]", shifted.pretty())));
            }
            Ok(json!({
                "color": color,
                "method": ev.method,
                "value": ev.value.to_json(),
                "shifted": shifted.to_json(),
                "shift": [shift.0, shift.1],
                "sign": sign_for(g, color),
            }))
        }
        Command::Tail => {
            if cfg.n_max > cfg.tl_cap {
                return Err(Error::Resource(format!("--nmax {} above --tl-cap {}", cfg.n_max, cfg.tl_cap)));
            }
            let t = tail_extract(d, cfg.n_max, cfg.n_min)?;
            let coeffs: Vec<Value> = t.coeffs.iter().map(|(m, c)| json!([m, int_json(c)])).collect();
            Ok(json!({
                "coeffs": coeffs,
                "certified_degree2": t.certified_degree2,
                "certified_degree": half(t.certified_degree2),
                "certified": t.certified,
                "n_used": t.n_used,
                "n_max": t.n_max,
                "sign_normalization": t.sign_normalization,
                "violations": t.violations,
                "notes": t.notes,
            }))
        }
        Command::Kh => {
            let k = if color == 1 { 0 } else { cfg.twists };
            let t = twisted_diagram(d, color, k)?;
            let cabled = t.cabled().n();
            if cabled > cfg.crossing_limit {
                return Err(Error::Resource(format!("{cabled} cabled crossings above --crossing-limit {}", cfg.crossing_limit)));
            }
            let r = shifted_homology(&t)?;
            let mut v = r.to_json();
            let mut bounds = vec![];
            if cfg.verify_bounds {
                let below = if k == 0 { None } else { stabilization_front(d, color, &[k])?.front(k).flatten() };
                let rep = verify_bounds(&r, d, cfg.n_min.map(|n| n as i64), below);
                bounds = rep
                    .checks
                    .iter()
                    .map(|c| json!({
                        "name": c.name,
                        "applicable": c.applicable,
                        "pass": c.pass,
                        "violations": c.violations,
                    }))
                    .collect();
                v["bounds_below_i2"] = json!(below);
                v["n_used"] = json!(rep.n_used);
            }
            v["bounds"] = Value::Array(bounds);
            Ok(v)
        }
        Command::Verify => Err(Error::Domain("verify runs through the verification suite".into())),
    }
}

/// Loads the entries of the configured source. Bad corpus lines are reported
/// to `err` and skipped; the flag tells whether any were.
pub fn load_entries(cfg: &RunConfig, err: &mut dyn Write) -> std::result::Result<(Vec<Entry>, bool), String> {
    match &cfg.source {
        Source::Single(text) => {
            if let Some(e) = bundled_entry(text.trim()) {
                return Ok((vec![Entry { name: e.name, diagram: e.diagram }], false));
            }
            let d = parse_diagram(text).map_err(|e| format!("{e}\n  | {text}"))?;
            Ok((vec![Entry { name: "input".into(), diagram: d }], false))
        }
        Source::Bundled => Ok((bundled().into_iter().map(|e| Entry { name: e.name, diagram: e.diagram }).collect(), false)),
        Source::Corpus(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut entries = vec![];
            let mut bad = false;
            for r in parse_corpus(&text) {
                match r {
                    Ok(e) => entries.push(Entry { name: e.name, diagram: e.diagram }),
                    Err(e) => {
                        bad = true;
                        let _ = writeln!(err, "{}: {e}", path.display());
                    }
                }
            }
            Ok((entries, bad))
        }
    }
}

fn record(e: &Entry, cmd: Command, color: Option<u32>, cfg: &RunConfig, cache: Option<&Cache>) -> Value {
    let c = color.unwrap_or(1);
    let material = key_material(&e.diagram.render_pd(), cmd.name(), &params(cmd, c, cfg));
    let result = match cache.and_then(|k| k.get(&material)) {
        Some(v) => Ok(v),
        None => compute(cmd, &e.diagram, c, cfg).inspect(|v| {
            if let Some(k) = cache {
                // a failed write only costs a recomputation later
                let _ = k.put(&material, v);
            }
        }),
    };
    let mut r = json!({ "name": e.name, "command": cmd.name() });
    if let Some(n) = color {
        r["color"] = json!(n);
    }
    match result {
        Ok(v) => r["result"] = v,
        Err(err) => r["error"] = error_json(&err),
    }
    r
}

fn poly_text(v: &Value) -> String {
    LaurentPoly::from_json(v).map(|p| p.pretty()).unwrap_or_default()
}

fn table_text(v: &Value) -> String {
    let Some(rows) = v.as_array() else { return String::new() };
    let t = KhTable::from_entries(rows.iter().filter_map(|c| {
        Some(((c.get(0)?.as_i64()?, c.get(1)?.as_i64()?), c.get(2)?.as_u64()?))
    }));
    t.render()
}

/// Human-readable rendering of one record.
pub fn render_text(r: &Value) -> String {
    let name = r["name"].as_str().unwrap_or("?");
    let head = match r.get("color") {
        Some(c) => format!("{name} [N={c}]"),
        None => name.to_string(),
    };
    if let Some(e) = r.get("error") {
        return format!("{head}: error: {}", e["message"].as_str().unwrap_or(""));
    }
    let v = &r["result"];
    match r["command"].as_str().unwrap_or("") {
        "parse" => format!(
            "{head}: n={} writhe={} components={} unknots={}\n  {}",
            v["stats"]["n"], v["stats"]["writhe"], v["stats"]["components"], v["unknots"], v["pd"].as_str().unwrap_or("")
        ),
        "bstate" => {
            let red = if v["reduced"].is_null() {
                "not reduced (B-inadequate)".to_string()
            } else {
                format!("reduced: g={} struts={}", v["reduced"]["g"], v["reduced"]["struts"])
            };
            format!("{head}: g={} n={} n_i={} adequate={}; {red}", v["g"], v["n"], v["n_inadequate"], v["adequate"])
        }
        "jones" => format!("{head}: {}", v["text"].as_str().unwrap_or("")),
        "cjones" => format!(
            "{head}: J = {}\n  shifted by q^({}/2 + {}): {}",
            poly_text(&v["value"]),
            v["shift"][0],
            v["shift"][1],
            poly_text(&v["shifted"])
        ),
        "tail" => {
            let terms: Vec<String> = v["coeffs"]
                .as_array()
                .map(|a| a.iter().map(|t| format!("{}*q^{}", t[1], t[0])).collect())
                .unwrap_or_default();
            let mut s = format!(
                "{head}: {} + O(q^{}) certified={}",
                if terms.is_empty() { "0".into() } else { terms.join(" + ") },
                v["certified_degree"].as_str().unwrap_or(""),
                v["certified"]
            );
            for n in v["notes"].as_array().into_iter().flatten().chain(v["violations"].as_array().into_iter().flatten()) {
                s.push_str(&format!("\n  note: {}", n.as_str().unwrap_or("")));
            }
            s
        }
        "kh" => {
            let mut s = format!(
                "{head}: shifted by h^({}/2) q^{}, twist depth {}\n{}",
                v["shifts"][0],
                v["shifts"][1],
                v["provenance"]["twist_depth"],
                table_text(&v["table"]).trim_end()
            );
            for b in v["bounds"].as_array().into_iter().flatten() {
                let st = match (b["applicable"].as_bool(), b["pass"].as_bool()) {
                    (Some(false), _) => "n/a",
                    (_, Some(true)) => "pass",
                    _ => "FAIL",
                };
                s.push_str(&format!("\n  {} {st} {}", b["name"].as_str().unwrap_or(""), b["violations"]));
            }
            s
        }
        _ => format!("{head}: {v}"),
    }
}

/// Runs a per-diagram command and returns the process exit status.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if cfg.command == Command::Verify {
        return crate::verify::run_cli(cfg, out, err);
    }
    let (entries, mut failed) = match load_entries(cfg, err) {
        Ok(x) => x,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 1;
        }
    };
    let cache = cfg.cache.as_ref().and_then(|p| match Cache::open(p) {
        Ok(c) => Some(c),
        Err(e) => {
            let _ = writeln!(err, "warning: cache {} unusable: {e}", p.display());
            None
        }
    });
    let per_color = matches!(cfg.command, Command::Cjones | Command::Kh);
    let jobs: Vec<(usize, Option<u32>)> = entries
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            let colors: Vec<Option<u32>> = if per_color { cfg.colors.clone().map(Some).collect() } else { vec![None] };
            colors.into_iter().map(move |c| (i, c))
        })
        .collect();
    let work = || -> Vec<Value> {
        jobs.par_iter().map(|&(i, c)| record(&entries[i], cfg.command, c, cfg, cache.as_ref())).collect()
    };
    let records = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    };
    for r in &records {
        failed |= r.get("error").is_some();
        let line = if cfg.json { r.to_string() } else { render_text(r) };
        if writeln!(out, "{line}").is_err() {
            return 1;
        }
    }
    i32::from(failed)
}
