//! Element literals: decimal integers for `Z_{p^λ}`, otherwise polynomials in
//! the field generator `a` and the radical generator `X` with coefficients
//! written on the left, e.g. `2a+3`, `X+1`, `(a+1)X+a`, `X^2+X+1`.

use super::{Elem, RingError, RingTable};

struct Parser<'a> {
    ring: &'a RingTable,
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> RingError {
        RingError::Literal { literal: self.src.to_string(), reason: reason.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<i64, RingError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("bad integer"))
    }

    fn expr(&mut self) -> Result<Elem, RingError> {
        let r = self.ring;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                r.neg(self.term()?)
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = r.add(acc, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = r.sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem, RingError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(b'0'..=b'9' | b'a' | b'X' | b'x' | b'(' | b'*')) {
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            acc = self.ring.mul(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Elem, RingError> {
        let r = self.ring;
        let base = match self.peek() {
            Some(b'0'..=b'9') => r.from_int(self.number()?),
            Some(b'a') => {
                self.pos += 1;
                r.gen_a.ok_or_else(|| self.err("ring has no generator `a`"))?
            }
            Some(b'X' | b'x') => {
                self.pos += 1;
                r.gen_x.ok_or_else(|| self.err("ring has no generator `X`"))?
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                v
            }
            Some(c) => return Err(self.err(format!("unexpected `{}`", c as char))),
            None => return Err(self.err("unexpected end")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return Err(self.err("exponent must be an integer"));
            }
            let e = self.number()?;
            let mut acc = 1;
            for _ in 0..e {
                acc = r.mul(acc, base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

impl RingTable {
    /// Parse an element literal.
    pub fn parse(&self, literal: &str) -> Result<Elem, RingError> {
        let mut p = Parser { ring: self, src: literal, bytes: literal.as_bytes(), pos: 0 };
        if p.peek().is_none() {
            return Err(p.err("empty literal"));
        }
        let v = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err(format!("trailing input at byte {}", p.pos)));
        }
        Ok(v)
    }

    /// Canonical literal of an element; `parse(format(x)) == x`.
    pub fn format(&self, x: Elem) -> String {
        let c = &self.coeffs[x as usize];
        let da = self.a_degree;
        let dx = c.len() / da;
        if da == 1 && dx == 1 {
            return c[0].to_string();
        }
        let apoly = |j: usize| -> Vec<String> {
            let mut terms = vec![];
            for i in (0..da).rev() {
                let k = c[j * da + i];
                if k == 0 {
                    continue;
                }
                terms.push(match (i, k) {
                    (0, k) => k.to_string(),
                    (_, 1) => "a".to_string(),
                    (_, k) => format!("{k}a"),
                });
            }
            terms
        };
        let mut parts = vec![];
        for j in (0..dx).rev() {
            let terms = apoly(j);
            if terms.is_empty() {
                continue;
            }
            let xpow = match j {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{j}"),
            };
            let coef = terms.join("+");
            parts.push(if j == 0 {
                coef
            } else if coef == "1" {
                xpow
            } else if terms.len() == 1 {
                format!("{coef}{xpow}")
            } else {
                format!("({coef}){xpow}")
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}
