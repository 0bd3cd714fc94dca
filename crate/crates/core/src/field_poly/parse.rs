//! Recursive-descent parser for polynomial expressions such as
//! `2*x1^2*x3 + (x2 + 1)^2 - x4`.

use super::field::FieldParams;
use super::polynomial::Polynomial;
use crate::error::{GrmError, Result};

/// Parses `text` over F_p in `m` variables `x1..xm` and returns the reduced
/// polynomial. Accepts integers, `x<i>`, `+`, `-`, `*`, `^` and parentheses.
pub fn parse_polynomial(text: &str, p: u32, m: usize) -> Result<Polynomial> {
    let params = FieldParams::new(p)?;
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        params,
        m,
    };
    let f = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    params: FieldParams,
    m: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> GrmError {
        GrmError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            let f = self.power()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat(b'^') {
            if self.peek().is_none_or(|c| !c.is_ascii_digit()) {
                return Err(self.error("expected exponent"));
            }
            let e = self.integer_u64()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                if self.src.get(self.pos).is_none_or(|c| !c.is_ascii_digit()) {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let start = self.pos;
                let idx = self.integer_u64()?;
                let idx = usize::try_from(idx).unwrap_or(usize::MAX);
                if idx == 0 || idx > self.m {
                    self.pos = start;
                    return Err(GrmError::VariableOutOfRange {
                        index: idx,
                        m: self.m,
                    });
                }
                Polynomial::variable(self.params, self.m, idx)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = u64::from(self.params.p());
                let mut v = 0u64;
                while let Some(&d) = self.src.get(self.pos) {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    v = (v * 10 + u64::from(d - b'0')) % p;
                    self.pos += 1;
                }
                Ok(Polynomial::constant(self.params, self.m, v as u8))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer_u64(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v = 0u64;
        while let Some(&d) = self.src.get(self.pos) {
            if !d.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d - b'0')))
                .ok_or_else(|| GrmError::Parse {
                    offset: start,
                    message: "integer too large".into(),
                })?;
            self.pos += 1;
        }
        Ok(v)
    }
}
