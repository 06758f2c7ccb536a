use serde::{Deserialize, Serialize};

use super::{LinkDiagram, Orient};
use crate::{Error, Result};

/// A braid word on `strands` strands; letter `±i` is the generator `σ_i^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: u32,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Domain("braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(Error::Domain(format!(
                    "generator {l} out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn render(&self) -> String {
        let mut s = format!("s:{}", self.strands);
        for l in &self.letters {
            s.push_str(&format!(" {l}"));
        }
        s
    }
}

/// Parses `s:k l1 l2 ...`, letters being signed generator indices.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let text = text.split('#').next().unwrap_or("");
    let mut toks = text.split_whitespace();
    let perr = |col: usize, msg: String| Error::Parse { line: 1, col, msg };
    let col_of = |tok: &str| tok.as_ptr() as usize - text.as_ptr() as usize + 1;
    let head = toks.next().ok_or_else(|| perr(1, "empty braid".into()))?;
    let k = head
        .strip_prefix("s:")
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| perr(col_of(head), format!("expected strand count 's:k', found '{head}'")))?;
    let mut letters = vec![];
    for t in toks {
        let l: i32 = t
            .parse()
            .map_err(|_| perr(col_of(t), format!("bad braid letter '{t}'")))?;
        if l == 0 || l.unsigned_abs() >= k {
            return Err(perr(col_of(t), format!("generator {l} out of range for {k} strands")));
        }
        letters.push(l);
    }
    BraidWord::new(k, letters)
}

/// Closure of a braid drawn bottom to top. `σ_i` is the positive crossing of
/// strands i and i+1.
pub fn braid_closure(w: &BraidWord) -> LinkDiagram {
    let s = w.strands as usize;
    let mut next = s as u32 + 1;
    let bottom: Vec<u32> = (1..=s as u32).collect();
    let mut cur = bottom.clone();
    let mut raw: Vec<[u32; 4]> = vec![];
    for &l in &w.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (li, ri) = (cur[i], cur[i + 1]);
        let (lo, ro) = (next, next + 1);
        next += 2;
        raw.push(if l > 0 { [ri, ro, lo, li] } else { [li, ri, ro, lo] });
        cur[i] = lo;
        cur[i + 1] = ro;
    }
    // the closure identifies top labels with bottom labels
    let mut unknots = 0;
    for p in 0..s {
        let (top, bot) = (cur[p], bottom[p]);
        if top == bot {
            unknots += 1;
            continue;
        }
        for c in raw.iter_mut() {
            for x in c.iter_mut() {
                if *x == top {
                    *x = bot;
                }
            }
        }
    }
    LinkDiagram::from_raw(raw, unknots, Orient::Strict)
        .expect("braid closure is a valid diagram")
        .relabeled()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors() {
        assert!(parse_braid("s:2 2").is_err());
        assert!(parse_braid("2 1").is_err());
        assert!(parse_braid("").is_err());
        assert_eq!(parse_braid("s:3 -1 2").unwrap().letters, vec![-1, 2]);
    }

    #[test]
    fn empty_word_is_unknot() {
        let d = braid_closure(&parse_braid("s:1").unwrap());
        assert_eq!((d.n(), d.component_count()), (0, 1));
    }
}
