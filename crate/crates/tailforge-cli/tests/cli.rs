use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tailforge::corpus::parse_diagram;
use tailforge::jones::kauffman_bracket;

const CORPUS: &str = "# three small diagrams\n\
unknot: U\n\
trefoil: X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]\n\
hopf: BRAID s:2 -1 -1\n";

fn tailforge(args: &[&str], cache_env: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tailforge"));
    c.args(args).env_remove("TAILFORGE_CACHE");
    if let Some(p) = cache_env {
        c.env("TAILFORGE_CACHE", p);
    }
    c.output().expect("binary runs")
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect()
}

fn write_corpus(dir: &Path, text: &str) -> String {
    let p = dir.join("corpus.txt");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn corpus_brackets_match_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), CORPUS);
    let o = tailforge(&["jones", "--corpus", &corpus, "--json"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rs = records(&o);
    assert_eq!(rs.len(), 3);
    for (r, src) in rs.iter().zip(["U", "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "BRAID s:2 -1 -1"]) {
        let want = kauffman_bracket(&parse_diagram(src).unwrap()).unwrap().to_json();
        assert_eq!(r["result"]["bracket"], want, "{}", r["name"]);
    }
}

#[test]
fn empty_corpus_is_fine() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), "# nothing here\n\n");
    let o = tailforge(&["jones", "--corpus", &corpus, "--json"], None);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn bad_lines_fail_the_run_but_not_the_rest() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), &format!("{CORPUS}broken: X[1,2,3\n"));
    let o = tailforge(&["jones", "--corpus", &corpus, "--json"], None);
    assert!(!o.status.success());
    assert_eq!(records(&o).len(), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 5") && err.contains("X[1,2,3"), "{err}");
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), CORPUS);
    let run = |jobs: &str| tailforge(&["cjones", "--corpus", &corpus, "--color", "1..3", "--json", "--jobs", jobs], None).stdout;
    let a = run("1");
    assert_eq!(records(&Output { status: Default::default(), stdout: a.clone(), stderr: vec![] }).len(), 9);
    assert_eq!(a, run("1"));
    assert_eq!(a, run("4"));
    let kh = |jobs: &str| tailforge(&["kh", "--corpus", &corpus, "--json", "--jobs", jobs], None).stdout;
    assert_eq!(kh("1"), kh("3"));
}

#[test]
fn cache_hits_match_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), CORPUS);
    let cache = dir.path().join("cache");
    let fresh = tailforge(&["tail", "--corpus", &corpus, "--json"], None).stdout;
    let first = tailforge(&["tail", "--corpus", &corpus, "--json"], Some(&cache)).stdout;
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 3);
    let hit = tailforge(&["tail", "--corpus", &corpus, "--json"], Some(&cache)).stdout;
    assert_eq!(fresh, first);
    assert_eq!(fresh, hit);
    // the flag is used when the variable is absent
    let flagged = tailforge(&["tail", "--corpus", &corpus, "--json", "--cache", cache.to_str().unwrap()], None).stdout;
    assert_eq!(fresh, flagged);
}

#[test]
fn verify_gates_inadequate_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), "kink: X[1,1,2,2]\nunknot: U\n");
    let o = tailforge(&["verify", "--corpus", &corpus], None);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("SKIPPED kink N=1: B-inadequate"), "{out}");
    assert!(out.contains("SKIPPED kink: B-inadequate"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL") || l.starts_with("SKIPPED")).count(), 10);
}

#[test]
fn verify_with_color_one_reports_degenerate_certification() {
    let o = tailforge(&["verify", "--nmax", "1", "--twists", "2"], None);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("certified_degree 1/2"), "{out}");
    assert!(out.contains("degenerates"), "{out}");
}

#[test]
fn kh_json_shape() {
    let o = tailforge(&["kh", "hopf-neg", "--color", "2", "--twists", "2", "--json", "--verify-bounds"], None);
    assert!(o.status.success());
    let rs = records(&o);
    let r = &rs[0]["result"];
    for k in ["table", "shifts", "provenance", "bounds"] {
        assert!(r.get(k).is_some(), "missing {k}");
    }
    assert_eq!(r["provenance"]["color"], 2);
    assert!(r["bounds"].as_array().unwrap().iter().all(|b| b["pass"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tailforge(&["jones"], None).status.code(), Some(2));
    assert_eq!(tailforge(&["cjones", "U", "--color", "0"], None).status.code(), Some(2));
}

#[test]
fn bad_single_diagram_is_echoed() {
    let o = tailforge(&["jones", "X[1,2,3,4]", "--json"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("parse error") && err.contains("| X[1,2,3,4]"), "{err}");
}
