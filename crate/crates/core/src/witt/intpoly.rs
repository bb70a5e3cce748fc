use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A polynomial with integer coefficients in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        IntPoly { nvars, terms: BTreeMap::from([(e, BigInt::one())]) }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += ca * cb;
            }
        }
        IntPoly { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by an integer.
    pub fn div_exact(&self, k: &BigInt) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(Error::NonIntegrality);
            }
            terms.insert(e.clone(), q);
        }
        Ok(IntPoly { nvars: self.nvars, terms })
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let m = BigInt::from(p);
        let terms =
            self.terms.iter().map(|(e, c)| (e.clone(), c.mod_floor(&m))).filter(|(_, c)| !c.is_zero()).collect();
        IntPoly { nvars: self.nvars, terms }
    }

    /// Largest index of a variable that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|e| e.iter().rposition(|&x| x > 0)).max()
    }

    /// True when every term is divisible by variable `i`.
    pub fn divisible_by_var(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] > 0)
    }

    /// Re-embeds into `nvars` variables, sending variable `j` to `map[j]`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0; nvars];
            for (j, &x) in e.iter().enumerate() {
                if x > 0 {
                    out[map[j]] += x;
                }
            }
            (out, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| if x == 1 { names[j].clone() } else { format!("{}^{x}", names[j]) })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => out.push_str(&format!("{mag}*{}", mono.join("*"))),
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|j| format!("v{j}")).collect();
        f.write_str(&self.fmt_with(&names))
    }
}

/// Parses `(e1, e2, ...)` where each entry is an integer polynomial in
/// identifiers such as `x1` or `a`; new identifiers are appended to `names`.
pub fn parse_int_tuple(src: &str, names: &mut Vec<String>) -> Result<Vec<(usize, Term)>> {
    let s = src.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Syntax { pos: 0, msg: "expected '(' ... ')'".into() })?;
    let mut out = Vec::new();
    let mut offset = src.find('(').unwrap() + 1;
    for part in inner.split(',') {
        let mut p = IntParser { src: part.as_bytes(), pos: 0, names, base: offset };
        let t = p.expr()?;
        if p.peek().is_some() {
            return Err(Error::Syntax { pos: offset + p.pos, msg: "trailing input".into() });
        }
        out.push((offset, t));
        offset += part.len() + 1;
    }
    Ok(out)
}

/// A parsed expression with variables numbered in order of appearance.
#[derive(Clone, Debug, PartialEq)]
pub struct Term(Vec<(BTreeMap<usize, u32>, BigInt)>);

impl Term {
    fn constant(c: BigInt) -> Self {
        Term(vec![(BTreeMap::new(), c)])
    }

    fn var(i: usize) -> Self {
        Term(vec![(BTreeMap::from([(i, 1)]), BigInt::one())])
    }

    fn add(mut self, o: Term) -> Self {
        self.0.extend(o.0);
        self
    }

    fn neg(self) -> Self {
        Term(self.0.into_iter().map(|(m, c)| (m, -c)).collect())
    }

    fn mul(&self, o: &Term) -> Self {
        let mut out = Vec::new();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &o.0 {
                let mut m = ma.clone();
                for (v, e) in mb {
                    *m.entry(*v).or_insert(0) += e;
                }
                out.push((m, ca * cb));
            }
        }
        Term(out)
    }

    /// The polynomial in `nvars` variables.
    pub fn to_poly(&self, nvars: usize) -> IntPoly {
        IntPoly::from_terms(
            nvars,
            self.0.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (v, x) in m {
                    e[*v] = *x;
                }
                (e, c.clone())
            }),
        )
    }
}

struct IntParser<'a, 'n> {
    src: &'a [u8],
    pos: usize,
    names: &'n mut Vec<String>,
    base: usize,
}

impl IntParser<'_, '_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.base + self.pos, msg: msg.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
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

    fn expr(&mut self) -> Result<Term> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected exponent"))?;
        let mut acc = Term::constant(BigInt::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap();
                Ok(Term::constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                let i = match self.names.iter().position(|n| *n == name) {
                    Some(i) => i,
                    None => {
                        self.names.push(name);
                        self.names.len() - 1
                    }
                };
                Ok(Term::var(i))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{}'", c as char))),
        }
    }
}
