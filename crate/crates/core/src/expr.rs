//! Text syntax for field elements and tower monomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | 's'digit | 't' | '(' expr ')'
//! ```

use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: FieldCtx,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
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

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| syntax(start, "integer too large"))
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| syntax(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = self.eat(b'-');
        let e = self.integer()?;
        let e = if neg { -e } else { e };
        base.pow(e).map_err(|err| match err {
            Error::DivisionByZero => syntax(at, "negative power of zero"),
            other => other,
        })
    }

    fn atom(&mut self) -> Result<FieldElem> {
        let at = match self.peek() {
            None => return Err(syntax(self.pos, "unexpected end of input")),
            Some(_) => self.pos,
        };
        match self.src[at] {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            b'0'..=b'9' => {
                let n = self.integer()?;
                Ok(self.ctx.constant(n.rem_euclid(self.ctx.p as i64)))
            }
            b't' => {
                self.pos += 1;
                Ok(self.ctx.t())
            }
            b's' => {
                self.pos += 1;
                match self.src.get(self.pos) {
                    Some(d @ b'1'..=b'9') => {
                        let j = (d - b'0') as usize;
                        if j > self.ctx.r {
                            return Err(syntax(at, format!("s{j} exceeds r = {}", self.ctx.r)));
                        }
                        self.pos += 1;
                        Ok(self.ctx.s(j))
                    }
                    _ => Err(syntax(at, "expected digit after 's'")),
                }
            }
            c => Err(syntax(at, format!("unexpected character '{}'", c as char))),
        }
    }
}

/// Parses an element of `K` written in the expression grammar.
pub fn parse_field(ctx: FieldCtx, src: &str) -> Result<FieldElem> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(syntax(p.pos, "trailing input"));
    }
    Ok(e)
}

/// Parses a tower monomial such as `1`, `x1`, `x1*x2^2` into exponents
/// `(e_1, ..., e_n)`, each required to lie in `0..p`.
pub fn parse_tower_monomial(src: &str, n: usize, p: u8) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; n];
    let s = src.trim();
    if s == "1" {
        return Ok(exps);
    }
    let mut offset = 0;
    for factor in s.split('*') {
        let f = factor.trim();
        let bad = |m: &str| syntax(offset, m.to_string());
        let rest = f.strip_prefix('x').ok_or_else(|| bad("expected x<i>"))?;
        let (idx, pow) = match rest.split_once('^') {
            Some((i, e)) => (i, e.trim().parse::<u32>().map_err(|_| bad("bad exponent"))?),
            None => (rest, 1),
        };
        let i: usize = idx.trim().parse().map_err(|_| bad("bad variable index"))?;
        if i == 0 || i > n {
            return Err(bad("tower variable out of range"));
        }
        exps[i - 1] += pow;
        if exps[i - 1] >= p as u32 {
            return Err(bad("tower exponent must be below p"));
        }
        offset += factor.len() + 1;
    }
    Ok(exps)
}

/// Inverse of [`parse_tower_monomial`].
pub fn fmt_tower_monomial(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
