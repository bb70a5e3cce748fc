//! Sparse multivariate polynomials over `F_p`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration is
//! in lexicographic order with variable 0 most significant. Exponents are
//! signed 64-bit integers; every arithmetic path that could grow them uses
//! checked arithmetic.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::scalar::{add_mod, inv_mod, mul_mod, neg_mod};
use crate::error::{Error, Result};

pub type Monomial = SmallVec<[i64; 4]>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparsePoly {
    p: u8,
    nvars: usize,
    terms: BTreeMap<Monomial, u8>,
}

fn add_exps(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.iter().zip(b.iter()).map(|(x, y)| x.checked_add(*y).ok_or(Error::ExponentOverflow)).collect()
}

impl SparsePoly {
    pub fn zero(p: u8, nvars: usize) -> Self {
        SparsePoly { p, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: i64, p: u8, nvars: usize) -> Self {
        let mut out = Self::zero(p, nvars);
        let v = c.rem_euclid(p as i64) as u8;
        if v != 0 {
            out.terms.insert(SmallVec::from_elem(0, nvars), v);
        }
        out
    }

    pub fn one(p: u8, nvars: usize) -> Self {
        Self::constant(1, p, nvars)
    }

    pub fn var(i: usize, p: u8, nvars: usize) -> Self {
        let mut e: Monomial = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        Self::monomial(e, 1, p)
    }

    pub fn monomial(exps: Monomial, c: i64, p: u8) -> Self {
        debug_assert!(exps.iter().all(|&e| e >= 0), "negative exponent in polynomial");
        let nvars = exps.len();
        let mut out = Self::zero(p, nvars);
        let v = c.rem_euclid(p as i64) as u8;
        if v != 0 {
            out.terms.insert(exps, v);
        }
        out
    }

    pub fn from_terms(p: u8, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u8)>) -> Self {
        let mut out = Self::zero(p, nvars);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(m, c)| *c == 1 && m.iter().all(|&e| e == 0)).unwrap_or(false)
    }

    /// Returns the constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<u8> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then_some(*c)
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u8)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, u8)> {
        self.terms.iter().next_back().map(|(m, c)| (m, *c))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u8) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = add_mod(*o.get(), c, p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in small.terms.iter() {
            big.add_term(m.clone(), *c);
        }
        big
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        SparsePoly {
            p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), neg_mod(*c, p))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), neg_mod(*c, self.p));
        }
        out
    }

    pub fn scale(&self, c: u8) -> Self {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let p = self.p;
        SparsePoly {
            p,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), mul_mod(*v, c, p))).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.p, self.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(add_exps(ma, mb)?, mul_mod(*ca, *cb, self.p));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("exponent overflow")
    }

    /// Multiplies by the monomial `x^e` (exponents may be negative as long
    /// as the result stays a polynomial).
    pub fn shift(&self, e: &[i64]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut m2 = m.clone();
            for (x, d) in m2.iter_mut().zip(e) {
                *x = x.checked_add(*d).ok_or(Error::ExponentOverflow)?;
                if *x < 0 {
                    return Err(Error::Internal("monomial shift produced negative exponent".into()));
                }
            }
            terms.insert(m2, *c);
        }
        Ok(SparsePoly { p: self.p, nvars: self.nvars, terms })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.nvars);
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

    /// `x^(p^e)`: exponents scale by `p^e`, coefficients are fixed.
    pub fn frobenius(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(self.clone());
        }
        let factor = (self.p as i64).checked_pow(e).ok_or(Error::ExponentOverflow)?;
        self.scale_exponents(&vec![factor; self.nvars])
    }

    /// Multiplies the exponent of variable `i` by `factors[i]`.
    pub fn scale_exponents(&self, factors: &[i64]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut m2 = m.clone();
            for (x, f) in m2.iter_mut().zip(factors) {
                *x = x.checked_mul(*f).ok_or(Error::ExponentOverflow)?;
            }
            terms.insert(m2, *c);
        }
        Ok(SparsePoly { p: self.p, nvars: self.nvars, terms })
    }

    /// Returns `y` with `y^p = self` if every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.p as i64;
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            if m.iter().any(|e| e % p != 0) {
                return None;
            }
            terms.insert(m.iter().map(|e| e / p).collect(), *c);
        }
        Some(SparsePoly { p: self.p, nvars: self.nvars, terms })
    }

    pub fn degree_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|m| m[var]).max()
    }

    /// Lowest exponent of `var` among the terms.
    pub fn order_in(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|m| m[var]).min()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Componentwise minimum of all exponent vectors.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, m| {
            for (a, b) in acc.iter_mut().zip(m.iter()) {
                *a = (*a).min(*b);
            }
            acc
        }))
    }

    /// The coefficient polynomial of `var^k` (with `var` removed).
    pub fn coeff_of_power(&self, var: usize, k: i64) -> Self {
        let mut out = Self::zero(self.p, self.nvars);
        for (m, c) in self.terms.iter() {
            if m[var] == k {
                let mut m2 = m.clone();
                m2[var] = 0;
                out.terms.insert(m2, *c);
            }
        }
        out
    }

    /// Splits into coefficients of powers of `var`.
    pub fn coeffs_in(&self, var: usize) -> BTreeMap<i64, SparsePoly> {
        let mut out: BTreeMap<i64, SparsePoly> = BTreeMap::new();
        for (m, c) in self.terms.iter() {
            let mut m2 = m.clone();
            let k = m2[var];
            m2[var] = 0;
            out.entry(k).or_insert_with(|| Self::zero(self.p, self.nvars)).terms.insert(m2, *c);
        }
        out
    }

    /// Leading coefficient viewed as a polynomial in `var`.
    pub fn lead_coeff_in(&self, var: usize) -> Self {
        match self.degree_in(var) {
            Some(d) => self.coeff_of_power(var, d),
            None => Self::zero(self.p, self.nvars),
        }
    }

    /// Monic normalisation: divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) if c != 1 => self.scale(inv_mod(c, self.p)),
            _ => self.clone(),
        }
    }

    /// Exact division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.p, self.nvars));
        }
        let (lm, lc) = other.leading().map(|(m, c)| (m.clone(), c))?;
        let lc_inv = inv_mod(lc, self.p);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.p, self.nvars);
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c)) {
            let mut qm: Monomial = SmallVec::with_capacity(self.nvars);
            for (a, b) in m.iter().zip(lm.iter()) {
                if a < b {
                    return None;
                }
                qm.push(a - b);
            }
            let qc = mul_mod(c, lc_inv, self.p);
            let term = Self::monomial(qm.clone(), qc as i64, self.p);
            rem = rem.sub(&other.checked_mul(&term).ok()?);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Substitutes `var = 0`.
    pub fn at_zero(&self, var: usize) -> Self {
        self.coeff_of_power(var, 0)
    }

    /// Embeds into a ring with more variables (new ones appended).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.resize(nvars, 0);
                (m2, *c)
            })
            .collect();
        SparsePoly { p: self.p, nvars, terms }
    }

    /// Evaluates term by term with caller-supplied ring operations.
    pub fn evaluate<T: Clone>(
        &self,
        zero: T,
        scalar: impl Fn(u8) -> T,
        var_pow: impl Fn(usize, i64) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in self.terms.iter() {
            let mut term = scalar(*c);
            for (i, &e) in m.iter().enumerate() {
                if e != 0 {
                    term = mul(&term, &var_pow(i, e));
                }
            }
            acc = add(&acc, &term);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SparsePoly {
        SparsePoly::var(i, 2, 2)
    }

    #[test]
    fn freshman_dream() {
        let s = x(0).add(&x(1));
        let sq = s.mul(&s);
        assert_eq!(sq, x(0).mul(&x(0)).add(&x(1).mul(&x(1))));
        assert_eq!(s.frobenius(1).unwrap(), sq);
        assert_eq!(sq.pth_root().unwrap(), s);
        assert!(s.pth_root().is_none());
    }

    #[test]
    fn exact_division() {
        let a = x(0).add(&SparsePoly::one(2, 2));
        let b = x(1).add(&x(0));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&x(0).add(&x(0).mul(&x(1))).add(&SparsePoly::one(2, 2))).is_none());
    }

    #[test]
    fn overflow_is_checked() {
        let mut e: Monomial = SmallVec::from_elem(0, 2);
        e[0] = i64::MAX / 2 + 1;
        let big = SparsePoly::monomial(e, 1, 2);
        assert_eq!(big.checked_mul(&big), Err(Error::ExponentOverflow));
        assert_eq!(big.frobenius(1), Err(Error::ExponentOverflow));
    }

    #[test]
    fn coefficient_views() {
        let p = x(0).mul(&x(1)).add(&x(1)).add(&x(0));
        let by1 = p.coeffs_in(1);
        assert_eq!(by1[&1], x(0).add(&SparsePoly::one(2, 2)));
        assert_eq!(by1[&0], x(0));
        assert_eq!(p.order_in(1), Some(0));
        assert_eq!(p.degree_in(0), Some(1));
    }
}
