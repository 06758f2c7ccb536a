use super::{LinkDiagram, Orient};
use crate::{Error, Result};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0 }
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in self.chars.iter().take(pos) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        let (line, col) = self.line_col(pos);
        Error::Parse { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    /// Skips whitespace, separators and `#` comments.
    fn skip(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
            } else if c.is_whitespace() || c == ',' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_spaces();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(self.pos, format!("expected '{want}', found '{c}'"))),
            None => Err(self.err(self.pos, format!("expected '{want}', found end of input"))),
        }
    }

    fn skip_spaces(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_spaces();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.peek().map(|c| format!("'{c}'")).unwrap_or("end of input".into());
            return Err(self.err(start, format!("expected edge label, found {found}")));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err(start, format!("edge label {s} too large")))
    }
}

/// Parses `X[a,b,c,d] ... U ...`; an optional `PD[ ... ]` wrapper is accepted.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let mut cur = Cursor::new(text);
    let mut raw = Vec::new();
    let mut unknots = 0;
    let mut starts = Vec::new();
    let mut wrapped = false;
    loop {
        cur.skip();
        let Some(c) = cur.peek() else { break };
        let at = cur.pos;
        match c {
            'X' => {
                cur.pos += 1;
                cur.expect('[')?;
                let mut s = [0u32; 4];
                for (i, slot) in s.iter_mut().enumerate() {
                    if i > 0 {
                        cur.expect(',')?;
                    }
                    *slot = cur.number()?;
                }
                cur.expect(']')?;
                raw.push(s);
                starts.push(at);
            }
            'U' => {
                cur.pos += 1;
                if cur.peek().is_some_and(|c| c.is_alphanumeric()) {
                    return Err(cur.err(at, "unexpected token"));
                }
                unknots += 1;
            }
            'P' if !wrapped && cur.chars[at..].starts_with(&['P', 'D', '[']) => {
                cur.pos += 3;
                wrapped = true;
            }
            ']' if wrapped => {
                cur.pos += 1;
                wrapped = false;
            }
            other => return Err(cur.err(at, format!("unexpected character '{other}'"))),
        }
    }
    if wrapped {
        return Err(cur.err(cur.pos, "unterminated PD[ wrapper"));
    }
    if raw.is_empty() && unknots == 0 {
        return Err(cur.err(0, "empty diagram"));
    }
    // label multiplicity errors point at the first offending crossing
    let mut count = std::collections::HashMap::new();
    for s in &raw {
        for l in s {
            *count.entry(*l).or_insert(0usize) += 1;
        }
    }
    for (i, s) in raw.iter().enumerate() {
        for l in s {
            let k = count[l];
            if k != 2 {
                return Err(cur.err(
                    starts[i],
                    format!("edge label {l} occurs {k} time{} (expected 2)", if k == 1 { "" } else { "s" }),
                ));
            }
        }
    }
    LinkDiagram::from_raw(raw, unknots, Orient::Strict).map_err(|e| match e {
        Error::Domain(m) => {
            let (line, col) = cur.line_col(starts.first().copied().unwrap_or(0));
            Error::Parse { line, col, msg: m }
        }
        other => other,
    })
}
