//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := [ '+' | '-' ] term ( ( '+' | '-' ) term )*
//! term   := power ( ( '*' | '/' ) power )*
//! power  := atom [ '^' [ '-' ] digits ]
//! atom   := digits | ident | '(' expr ')'
//! ident  := [A-Za-z_] [A-Za-z0-9_]*
//! ```
//!
//! Whitespace is ignored between tokens. The divisor of `/` and the base of
//! a negative power must be a unit (±1 times a monomial in invertible
//! variables). Juxtaposition such as `2p` is rejected.

use num_bigint::BigInt;
use thiserror::Error;

use super::{LaurentError, LaurentPoly, Monomial, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent on non-invertible variable `{0}`")]
    NotInvertible(String),
    #[error("divisor is not a unit monomial")]
    NonUnitDivisor,
    #[error("negative power of a non-unit")]
    NonUnitPower,
    #[error("exponent out of range")]
    ExponentRange,
    #[error("unexpected {0}")]
    Unexpected(String),
}

pub(super) fn parse(text: &str, ring: &RingSpec) -> Result<LaurentPoly, LaurentError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected().into());
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingSpec,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn unexpected(&self) -> ParseError {
        let what = match self.src.get(self.pos) {
            Some(&c) => format!("`{}`", c as char),
            None => "end of input".to_string(),
        };
        self.error(self.pos, ParseErrorKind::Unexpected(what))
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = {
                        self.skip_ws();
                        self.pos
                    };
                    let divisor = self.power()?;
                    acc = acc
                        .unit_divide(&divisor)
                        .map_err(|_| self.error(at, ParseErrorKind::NonUnitDivisor))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<LaurentPoly, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let digits = self.digits().ok_or_else(|| self.unexpected())?;
        let n: u32 = digits
            .parse()
            .ok()
            .filter(|&n| n <= i32::MAX as u32)
            .ok_or_else(|| self.error(at, ParseErrorKind::ExponentRange))?;
        if !neg {
            return Ok(base.pow(n));
        }
        if let Some((i, _)) = single_variable(&base) {
            if !self.ring.is_invertible(i) {
                let name = self.ring.variables()[i].name.clone();
                return Err(self.error(start, ParseErrorKind::NotInvertible(name)));
            }
        }
        let inv = base
            .unit_inverse()
            .map_err(|_| self.error(start, ParseErrorKind::NonUnitPower))?;
        Ok(inv.pow(n))
    }

    fn atom(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                self.reject_juxtaposition()?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit present");
                let n: BigInt = d.parse().expect("ascii digits");
                self.reject_juxtaposition()?;
                Ok(LaurentPoly::constant(self.ring, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let i = self
                    .ring
                    .index_of(name)
                    .ok_or_else(|| self.error(start, ParseErrorKind::UnknownVariable(name.into())))?;
                self.reject_juxtaposition()?;
                Ok(LaurentPoly::monomial(self.ring, Monomial::var(self.ring.len(), i, 1), 1))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| String::from_utf8(self.src[start..self.pos].to_vec()).expect("ascii"))
    }

    /// `2p`, `p q`, `(1-p)(1+p)` are all rejected: products need `*`.
    fn reject_juxtaposition(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'(' => Err(self.unexpected()),
            _ => Ok(()),
        }
    }
}

fn single_variable(p: &LaurentPoly) -> Option<(usize, i32)> {
    if p.num_terms() != 1 {
        return None;
    }
    let (m, _) = p.terms().next()?;
    let mut f = m.factors();
    let first = f.next()?;
    f.next().is_none().then_some(first)
}
