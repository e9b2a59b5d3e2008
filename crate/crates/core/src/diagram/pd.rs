//! Text form of planar diagram codes.
//!
//! A code is a whitespace-separated list of `X(a,b,c,d)` terms, each
//! optionally followed by `+` or `-`, and `O` tokens, each standing for one
//! crossing-free circle. Commas inside a term may be surrounded by spaces.

use std::fmt;

use super::{DiagramError, EdgeId, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdEntry {
    pub edges: [EdgeId; 4],
    pub sign: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PdCode {
    pub entries: Vec<PdEntry>,
    pub free_loops: usize,
}

impl PdCode {
    pub fn parse(text: &str) -> Result<PdCode, DiagramError> {
        let src = text.as_bytes();
        let mut pos = 0;
        let mut code = PdCode::default();
        let err = |offset: usize, msg: &str| DiagramError::PdSyntax { offset, message: msg.to_string() };
        let skip_ws = |pos: &mut usize| {
            while *pos < src.len() && (src[*pos].is_ascii_whitespace() || src[*pos] == b',') {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            let Some(&c) = src.get(pos) else { break };
            match c {
                b'O' => {
                    code.free_loops += 1;
                    pos += 1;
                }
                b'X' => {
                    pos += 1;
                    if src.get(pos) != Some(&b'(') && src.get(pos) != Some(&b'[') {
                        return Err(err(pos, "expected `(` after X"));
                    }
                    let close = if src[pos] == b'(' { b')' } else { b']' };
                    pos += 1;
                    let mut edges = [0; 4];
                    for (k, slot) in edges.iter_mut().enumerate() {
                        while src.get(pos).is_some_and(u8::is_ascii_whitespace) {
                            pos += 1;
                        }
                        let start = pos;
                        while src.get(pos).is_some_and(u8::is_ascii_digit) {
                            pos += 1;
                        }
                        if start == pos {
                            return Err(err(pos, "expected edge label"));
                        }
                        *slot = std::str::from_utf8(&src[start..pos])
                            .expect("ascii")
                            .parse()
                            .map_err(|_| err(start, "edge label out of range"))?;
                        while src.get(pos).is_some_and(u8::is_ascii_whitespace) {
                            pos += 1;
                        }
                        let want = if k == 3 { close } else { b',' };
                        if src.get(pos) != Some(&want) {
                            return Err(err(pos, if k == 3 { "expected closing bracket" } else { "expected `,`" }));
                        }
                        pos += 1;
                    }
                    let sign = match src.get(pos) {
                        Some(b'+') => {
                            pos += 1;
                            Some(Sign::Positive)
                        }
                        Some(b'-') => {
                            pos += 1;
                            Some(Sign::Negative)
                        }
                        _ => None,
                    };
                    code.entries.push(PdEntry { edges, sign });
                }
                _ => return Err(err(pos, "expected `X(...)` or `O`")),
            }
        }
        Ok(code)
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.entries {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let [a, b, c, d] = e.edges;
            write!(f, "X({a},{b},{c},{d})")?;
            match e.sign {
                Some(Sign::Positive) => f.write_str("+")?,
                Some(Sign::Negative) => f.write_str("-")?,
                None => {}
            }
        }
        for _ in 0..self.free_loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str("O")?;
        }
        Ok(())
    }
}
