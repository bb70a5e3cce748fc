//! Exact elements of `K = F_p(s_1, ..., s_r)(t)`.

use std::fmt;

use smallvec::SmallVec;

use super::gcd::gcd;
use super::poly::{Monomial, SparsePoly};
use super::scalar::check_prime;
use crate::error::{Error, Result};

/// Shape of the base field: the prime and the number of `s` variables.
/// Polynomials carry `r + 1` variables, `t` being the last one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldCtx {
    pub p: u8,
    pub r: usize,
}

impl FieldCtx {
    pub fn new(p: u64, r: usize) -> Result<Self> {
        let p = check_prime(p)?;
        if r > 9 {
            return Err(Error::PreconditionViolation(format!("at most 9 s-variables, got {r}")));
        }
        Ok(FieldCtx { p, r })
    }

    pub fn nvars(&self) -> usize {
        self.r + 1
    }

    pub fn t_index(&self) -> usize {
        self.r
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_poly(SparsePoly::zero(self.p, self.nvars()))
    }

    pub fn one(&self) -> FieldElem {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> FieldElem {
        FieldElem::from_poly(SparsePoly::constant(c, self.p, self.nvars()))
    }

    /// The variable `s_j` (1-based, matching the printed names).
    pub fn s(&self, j: usize) -> FieldElem {
        assert!(j >= 1 && j <= self.r, "s{j} out of range");
        FieldElem::from_poly(SparsePoly::var(j - 1, self.p, self.nvars()))
    }

    pub fn t(&self) -> FieldElem {
        self.t_pow(1)
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(&self, k: i64) -> FieldElem {
        let mut e: Monomial = SmallVec::from_elem(0, self.nvars());
        e[self.t_index()] = k;
        FieldElem::laurent_monomial(e, 1, self.p)
    }

    /// `c * prod x_i^{e_i}` with possibly negative exponents.
    pub fn monomial(&self, exps: &[i64], c: i64) -> FieldElem {
        FieldElem::laurent_monomial(exps.iter().copied().collect(), c, self.p)
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.r).map(|j| format!("s{j}")).collect();
        v.push("t".into());
        v
    }
}

/// A fraction of sparse polynomials. The denominator is nonzero and monic,
/// and numerator and denominator share no monomial factor. Cancellation of
/// non-monomial common factors is deferred to [`FieldElem::reduced`].
#[derive(Clone, Debug)]
pub struct FieldElem {
    num: SparsePoly,
    den: SparsePoly,
}

impl FieldElem {
    pub fn from_poly(num: SparsePoly) -> Self {
        let den = SparsePoly::one(num.p(), num.nvars());
        FieldElem { num, den }
    }

    pub fn laurent_monomial(exps: Monomial, c: i64, p: u8) -> Self {
        let pos: Monomial = exps.iter().map(|&e| e.max(0)).collect();
        let neg: Monomial = exps.iter().map(|&e| (-e).max(0)).collect();
        FieldElem { num: SparsePoly::monomial(pos, c, p), den: SparsePoly::monomial(neg, 1, p) }.fixed()
    }

    /// Builds `num / den`, failing on a zero denominator.
    pub fn from_fraction(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem { num, den }.fixed())
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn p(&self) -> u8 {
        self.num.p()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is a monomial, i.e. the element is a
    /// Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    fn zero_like(&self) -> Self {
        FieldElem::from_poly(SparsePoly::zero(self.p(), self.nvars()))
    }

    /// Cheap canonical form: monic denominator, no shared monomial content.
    fn fixed(mut self) -> Self {
        if self.num.is_zero() {
            self.den = SparsePoly::one(self.p(), self.nvars());
            return self;
        }
        let cn = self.num.monomial_content().expect("nonzero");
        let cd = self.den.monomial_content().expect("nonzero");
        let common: Vec<i64> = cn.iter().zip(cd.iter()).map(|(a, b)| -(*a.min(b))).collect();
        if common.iter().any(|&e| e != 0) {
            self.num = self.num.shift(&common).expect("content shift");
            self.den = self.den.shift(&common).expect("content shift");
        }
        if let Some((_, c)) = self.den.leading() {
            if c != 1 {
                let inv = super::scalar::inv_mod(c, self.p());
                self.num = self.num.scale(inv);
                self.den = self.den.scale(inv);
            }
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return FieldElem { num: self.num.add(&o.num), den: self.den.clone() }.fixed();
        }
        if self.den.is_monomial() && o.den.is_monomial() {
            let a = self.den.leading().unwrap().0.clone();
            let b = o.den.leading().unwrap().0.clone();
            let l: Vec<i64> = a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect();
            let sa: Vec<i64> = l.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
            let sb: Vec<i64> = l.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
            let num = self.num.shift(&sa).expect("shift").add(&o.num.shift(&sb).expect("shift"));
            let den = SparsePoly::monomial(l.into_iter().collect(), 1, self.p());
            return FieldElem { num, den }.fixed();
        }
        if let Some(q) = o.den.div_exact(&self.den) {
            return FieldElem { num: self.num.mul(&q).add(&o.num), den: o.den.clone() }.fixed();
        }
        if let Some(q) = self.den.div_exact(&o.den) {
            return FieldElem { num: o.num.mul(&q).add(&self.num), den: self.den.clone() }.fixed();
        }
        FieldElem { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.fixed()
    }

    pub fn neg(&self) -> Self {
        FieldElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.is_zero() || o.is_zero() {
            return Ok(self.zero_like());
        }
        Ok(FieldElem { num: self.num.checked_mul(&o.num)?, den: self.den.checked_mul(&o.den)? }.fixed())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("exponent overflow")
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p() as i64) as u8;
        FieldElem { num: self.num.scale(c), den: self.den.clone() }.fixed()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElem { num: self.den.clone(), den: self.num.clone() }.fixed())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(FieldElem { num: base.num.pow(e), den: base.den.pow(e) }.fixed())
    }

    /// `x^(p^e)`, computed termwise.
    pub fn frobenius_power(&self, e: u32) -> Result<Self> {
        Ok(FieldElem { num: self.num.frobenius(e)?, den: self.den.frobenius(e)? }.fixed())
    }

    /// The unique `y` with `y^p = self`, if it exists in this field.
    ///
    /// Uses `a/b = (a b^{p-1}) / b^p`: the element is a p-th power exactly
    /// when the polynomial `a b^{p-1}` is one, so no gcd is needed.
    pub fn pth_root(&self) -> Result<Self> {
        if let Some(n) = self.num.pth_root() {
            if let Some(d) = self.den.pth_root() {
                return Ok(FieldElem { num: n, den: d }.fixed());
            }
        }
        let p = self.p() as u64;
        let lifted = self.num.mul(&self.den.pow(p - 1));
        let root = lifted.pth_root().ok_or(Error::NotAPthPower)?;
        Ok(FieldElem { num: root, den: self.den.clone() }.fixed())
    }

    /// Order of vanishing along variable `var` (the t-adic valuation when
    /// `var` is `t`). `None` for zero.
    pub fn order_in(&self, var: usize) -> Option<i64> {
        Some(self.num.order_in(var)? - self.den.order_in(var)?)
    }

    /// Multiplies the exponent of each variable by the given factor.
    pub fn scale_exponents(&self, factors: &[i64]) -> Result<Self> {
        Ok(FieldElem { num: self.num.scale_exponents(factors)?, den: self.den.scale_exponents(factors)? }.fixed())
    }

    /// Lowest terms, when the gcd fits the work budget. The result is
    /// always equal to `self`.
    pub fn reduced(&self) -> Self {
        if self.den.is_monomial() || self.num.is_zero() {
            return self.clone();
        }
        match gcd(&self.num, &self.den) {
            Some(g) if !g.is_one() => {
                let num = self.num.div_exact(&g).expect("gcd divides");
                let den = self.den.div_exact(&g).expect("gcd divides");
                FieldElem { num, den }.fixed()
            }
            _ => self.clone(),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let n = fmt_poly(&self.num, names);
        if self.den.is_one() {
            return n;
        }
        let d = fmt_poly(&self.den, names);
        let n = if self.num.len() > 1 { format!("({n})") } else { n };
        let d = if self.den.len() > 1 || d.contains('*') { format!("({d})") } else { d };
        format!("{n}/{d}")
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        if self.den.is_monomial() && o.den.is_monomial() {
            return false;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for FieldElem {}

/// Renders a polynomial using the given variable names.
pub fn fmt_poly(p: &SparsePoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        let mut factors = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        let term = match (c, factors.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => factors.join("*"),
            _ => format!("{}*{}", c, factors.join("*")),
        };
        parts.push(term);
    }
    parts.join(" + ")
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<String> = (1..self.nvars()).map(|j| format!("s{j}")).collect();
        names.push("t".into());
        f.write_str(&self.fmt_with(&names))
    }
}
