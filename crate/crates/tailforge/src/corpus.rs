//! Corpus files: one diagram per line as `name: PDCODE` or `name: BRAID s:k ...`.
//! `#` starts a comment; blank lines are skipped.

use serde::Serialize;

use crate::diagram::{braid_closure, parse_braid, parse_pd, LinkDiagram};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    /// 1-based line in the corpus text.
    pub line: usize,
    /// Diagram text after the colon.
    pub source: String,
    #[serde(skip)]
    pub diagram: LinkDiagram,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusError {
    pub line: usize,
    /// The offending line, verbatim.
    pub text: String,
    pub error: Error,
}

impl std::fmt::Display for CorpusError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}\n  | {}", self.line, self.error, self.text)
    }
}

/// A diagram given either as a PD code or as `BRAID s:k letters...`.
pub fn parse_diagram(src: &str) -> Result<LinkDiagram> {
    let s = src.trim();
    match s.strip_prefix("BRAID") {
        Some(rest) => Ok(braid_closure(&parse_braid(rest.trim())?)),
        None => parse_pd(s),
    }
}

/// Parses every line independently so one bad line does not hide the rest.
pub fn parse_corpus(text: &str) -> Vec<std::result::Result<CorpusEntry, CorpusError>> {
    let mut out = vec![];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |error| CorpusError { line, text: raw.to_string(), error };
        let Some((name, src)) = body.split_once(':') else {
            out.push(Err(err(Error::Parse { line, col: 1, msg: "expected `name: diagram`".into() })));
            continue;
        };
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            out.push(Err(err(Error::Parse { line, col: 1, msg: format!("bad entry name {name:?}") })));
            continue;
        }
        out.push(match parse_diagram(src) {
            Ok(diagram) => Ok(CorpusEntry { name: name.into(), line, source: src.trim().into(), diagram }),
            Err(Error::Parse { col, msg, .. }) => {
                let col = col + raw.find(src.trim()).unwrap_or(0);
                Err(err(Error::Parse { line, col, msg }))
            }
            Err(e) => Err(err(e)),
        });
    }
    out
}

pub const BUNDLED: &str = "\
# 0 to 8 crossing diagrams
unknot: U
unknot-kink-neg: X[1,2,2,1]
unknot-kink-pos: X[1,1,2,2]
unknot-twisted: BRAID s:2 1 -1
two-unknots: U U
trefoil-left: X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]
trefoil-right: X[4,2,5,1] X[6,4,1,3] X[2,6,3,5]
trefoil-plus-unknot: X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] U
figure-eight: X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]
hopf-neg: BRAID s:2 -1 -1
hopf-pos: BRAID s:2 1 1
# closures of negative braids
trefoil-braid: BRAID s:2 -1 -1 -1
cinquefoil: BRAID s:2 -1 -1 -1 -1 -1
neg-3a: BRAID s:3 -1 -2 -1 -2
neg-3b: BRAID s:3 -1 -1 -2 -2 -1 -2
neg-4: BRAID s:4 -1 -2 -3 -1 -2 -3
torus-3-4-neg: BRAID s:3 -1 -2 -1 -2 -1 -2 -1 -2
# strut-doubled at one crossing
trefoil-left-doubled: X[1,4,7,8] X[3,6,4,1] X[5,2,6,3] X[8,7,2,5]
hopf-neg-doubled: X[1,2,5,6] X[4,3,2,1] X[6,5,3,4]
neg-3a-doubled: X[1,2,3,4] X[3,5,9,10] X[4,7,8,1] X[8,6,5,2] X[10,9,6,7]
# B-inadequate
torus-3-4-pos: BRAID s:3 1 2 1 2 1 2 1 2
";

/// Names of bundled entries that close negative braids.
pub const NEGATIVE_BRAIDS: &[&str] =
    &["hopf-neg", "trefoil-braid", "cinquefoil", "neg-3a", "neg-3b", "neg-4", "torus-3-4-neg"];

pub fn bundled() -> Vec<CorpusEntry> {
    parse_corpus(BUNDLED).into_iter().map(|e| e.expect("bundled corpus parses")).collect()
}

pub fn bundled_entry(name: &str) -> Option<CorpusEntry> {
    bundled().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_parses() {
        let c = bundled();
        assert_eq!(c.len(), 21);
        assert!(c.iter().all(|e| e.diagram.n() <= 8));
        let names: std::collections::BTreeSet<_> = c.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), c.len());
        assert!(NEGATIVE_BRAIDS.iter().all(|n| names.contains(n)));
    }

    #[test]
    fn bad_lines_are_isolated() {
        let text = "a: U\nb: X[1,2,3]\n# note\nc BRAID s:2 1\nd: BRAID s:2 -1 -1 -1\n";
        let r = parse_corpus(text);
        assert_eq!(r.len(), 4);
        assert!(r[0].is_ok() && r[3].is_ok());
        let e = r[1].as_ref().unwrap_err();
        assert_eq!((e.line, e.text.as_str()), (2, "b: X[1,2,3]"));
        assert_eq!(r[2].as_ref().unwrap_err().line, 4);
        assert_eq!(r[3].as_ref().unwrap().diagram.n(), 3);
    }

    #[test]
    fn empty_corpus() {
        assert!(parse_corpus("").is_empty());
        assert!(parse_corpus("# nothing\n\n").is_empty());
    }
}
