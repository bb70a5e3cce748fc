//! Truncated Witt vectors (components indexed from 1) with universal
//! addition, multiplication and negation polynomials obtained by solving
//! the ghost equations over the integers.

mod intpoly;

use std::collections::HashMap;
use std::fmt::Debug;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};

pub use intpoly::{parse_int_tuple, IntPoly, Term};

/// Longest supported Witt vectors.
pub const MAX_LEN: usize = 4;

/// Variables of the binary universal polynomials: `x_j` is variable
/// `2(j-1)`, `y_j` is variable `2(j-1)+1`.
pub const BINARY_VARS: usize = 2 * MAX_LEN;

pub fn binary_var_names() -> Vec<String> {
    (1..=MAX_LEN).flat_map(|j| [format!("x{j}"), format!("y{j}")]).collect()
}

/// A commutative ring in which Witt components live.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, c: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `Some(p)` when the ring has characteristic `p`.
    fn characteristic(&self) -> Option<u8>;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// `Z[v_1, ..., v_n]`.
#[derive(Clone, Copy, Debug)]
pub struct Integers {
    pub nvars: usize,
}

/// `F_p[v_1, ..., v_n]`, coefficients kept in `[0, p)`.
#[derive(Clone, Copy, Debug)]
pub struct IntMod {
    pub p: u8,
    pub nvars: usize,
}

impl CoeffRing for Integers {
    type Elem = IntPoly;
    fn zero(&self) -> IntPoly {
        IntPoly::zero(self.nvars)
    }
    fn one(&self) -> IntPoly {
        IntPoly::one(self.nvars)
    }
    fn from_int(&self, c: &BigInt) -> IntPoly {
        IntPoly::constant(self.nvars, c.clone())
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.add(b)
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.mul(b)
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        a.neg()
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> Option<u8> {
        None
    }
}

impl CoeffRing for IntMod {
    type Elem = IntPoly;
    fn zero(&self) -> IntPoly {
        IntPoly::zero(self.nvars)
    }
    fn one(&self) -> IntPoly {
        IntPoly::one(self.nvars)
    }
    fn from_int(&self, c: &BigInt) -> IntPoly {
        IntPoly::constant(self.nvars, c.clone()).reduce_mod(self.p as u64)
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.add(b).reduce_mod(self.p as u64)
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a.mul(b).reduce_mod(self.p as u64)
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        a.neg().reduce_mod(self.p as u64)
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> Option<u8> {
        Some(self.p)
    }
}

impl CoeffRing for FieldCtx {
    type Elem = FieldElem;
    fn zero(&self) -> FieldElem {
        FieldCtx::zero(self)
    }
    fn one(&self) -> FieldElem {
        FieldCtx::one(self)
    }
    fn from_int(&self, c: &BigInt) -> FieldElem {
        self.constant(c.mod_floor(&BigInt::from(self.p)).to_i64().unwrap())
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.add(b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul(b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        a.neg()
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> Option<u8> {
        Some(self.p)
    }
}

/// `sum_c c prod_j vals[j]^{e_j}`.
pub fn eval<R: CoeffRing>(ring: &R, f: &IntPoly, vals: &[R::Elem]) -> R::Elem {
    let mut cache: HashMap<(usize, u32), R::Elem> = HashMap::new();
    let mut acc = ring.zero();
    for (e, c) in f.terms() {
        let mut term = ring.from_int(c);
        for (j, &x) in e.iter().enumerate() {
            if x == 0 || ring.is_zero(&term) {
                continue;
            }
            if ring.is_zero(&vals[j]) {
                term = ring.zero();
                break;
            }
            let pw = cache.entry((j, x)).or_insert_with(|| ring.pow(&vals[j], x as u64)).clone();
            term = ring.mul(&term, &pw);
        }
        if !ring.is_zero(&term) {
            acc = ring.add(&acc, &term);
        }
    }
    acc
}

/// `w_i = sum_{j<=i} p^{j-1} c_j^{p^{i-j}}` for 1-based `i`.
pub fn ghost_component<R: CoeffRing>(ring: &R, p: u8, comps: &[R::Elem], i: usize) -> R::Elem {
    let mut acc = ring.zero();
    for j in 1..=i {
        let pj = ring.from_int(&BigInt::from(p).pow(j as u32 - 1));
        let term = ring.mul(&pj, &ring.pow(&comps[j - 1], (p as u64).pow((i - j) as u32)));
        acc = ring.add(&acc, &term);
    }
    acc
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Kind {
    Sum,
    Prod,
    Neg,
}

type Cache = Mutex<HashMap<(u8, Kind), Vec<IntPoly>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn check_params(p: u8, m: usize) -> Result<()> {
    if ![2, 3, 5].contains(&p) {
        return Err(Error::UnsupportedPrime(p as u64));
    }
    if m == 0 || m > MAX_LEN {
        return Err(Error::PreconditionViolation(format!("Witt length {m} outside 1..={MAX_LEN}")));
    }
    Ok(())
}

fn universal(p: u8, kind: Kind, m: usize) -> Result<Vec<IntPoly>> {
    check_params(p, m)?;
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    let polys = guard.entry((p, kind)).or_default();
    let ring = Integers { nvars: if kind == Kind::Neg { MAX_LEN } else { BINARY_VARS } };
    let (xs, ys): (Vec<IntPoly>, Vec<IntPoly>) = match kind {
        Kind::Neg => ((0..MAX_LEN).map(|j| IntPoly::var(MAX_LEN, j)).collect(), Vec::new()),
        _ => (
            (0..MAX_LEN).map(|j| IntPoly::var(BINARY_VARS, 2 * j)).collect(),
            (0..MAX_LEN).map(|j| IntPoly::var(BINARY_VARS, 2 * j + 1)).collect(),
        ),
    };
    while polys.len() < m {
        let i = polys.len() + 1;
        let gx = ghost_component(&ring, p, &xs, i);
        let target = match kind {
            Kind::Sum => gx.add(&ghost_component(&ring, p, &ys, i)),
            Kind::Prod => gx.mul(&ghost_component(&ring, p, &ys, i)),
            Kind::Neg => gx.neg(),
        };
        let mut rest = target;
        for j in 1..i {
            let pj = BigInt::from(p).pow(j as u32 - 1);
            rest = rest.sub(&polys[j - 1].pow((p as u64).pow((i - j) as u32)).scale(&pj));
        }
        polys.push(rest.div_exact(&BigInt::from(p).pow(i as u32 - 1))?);
    }
    Ok(polys[..m].to_vec())
}

/// `S_1, ..., S_m` with `ghost(S) = ghost(x) + ghost(y)`, in the
/// variables of [`binary_var_names`].
pub fn universal_sum_polys(p: u8, m: usize) -> Result<Vec<IntPoly>> {
    universal(p, Kind::Sum, m)
}

/// `P_1, ..., P_m` with `ghost(P) = ghost(x) ghost(y)`.
pub fn universal_prod_polys(p: u8, m: usize) -> Result<Vec<IntPoly>> {
    universal(p, Kind::Prod, m)
}

/// `N_1, ..., N_m` in `x_1, ..., x_MAX_LEN` with `ghost(N) = -ghost(x)`.
pub fn universal_neg_polys(p: u8, m: usize) -> Result<Vec<IntPoly>> {
    universal(p, Kind::Neg, m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WittVec<E> {
    pub comps: Vec<E>,
}

impl<E> WittVec<E> {
    pub fn new(comps: Vec<E>) -> Self {
        WittVec { comps }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
}

/// `W_m` over a coefficient ring.
pub struct Witt<R> {
    pub base: R,
    pub p: u8,
    pub m: usize,
}

impl<R: CoeffRing> Witt<R> {
    pub fn new(base: R, p: u8, m: usize) -> Result<Self> {
        check_params(p, m)?;
        if base.characteristic().is_some_and(|q| q != p) {
            return Err(Error::PreconditionViolation(format!("base ring characteristic differs from p = {p}")));
        }
        Ok(Witt { base, p, m })
    }

    pub fn zero(&self) -> WittVec<R::Elem> {
        WittVec::new(vec![self.base.zero(); self.m])
    }

    /// `(c, 0, ..., 0)`.
    pub fn teichmuller_like(&self, c: R::Elem) -> WittVec<R::Elem> {
        let mut v = self.zero();
        v.comps[0] = c;
        v
    }

    fn check(&self, u: &WittVec<R::Elem>) -> Result<()> {
        if u.len() != self.m {
            return Err(Error::LengthMismatch(u.len(), self.m));
        }
        Ok(())
    }

    fn binary(&self, polys: &[IntPoly], u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.check(u)?;
        self.check(v)?;
        let mut vals = vec![self.base.zero(); BINARY_VARS];
        for j in 0..self.m {
            vals[2 * j] = u.comps[j].clone();
            vals[2 * j + 1] = v.comps[j].clone();
        }
        Ok(WittVec::new(polys.iter().map(|f| eval(&self.base, f, &vals)).collect()))
    }

    pub fn add(&self, u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.binary(&universal_sum_polys(self.p, self.m)?, u, v)
    }

    pub fn mul(&self, u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.binary(&universal_prod_polys(self.p, self.m)?, u, v)
    }

    pub fn neg(&self, u: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.check(u)?;
        let mut vals = vec![self.base.zero(); MAX_LEN];
        vals[..self.m].clone_from_slice(&u.comps);
        let polys = universal_neg_polys(self.p, self.m)?;
        Ok(WittVec::new(polys.iter().map(|f| eval(&self.base, f, &vals)).collect()))
    }

    pub fn sub(&self, u: &WittVec<R::Elem>, v: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.add(u, &self.neg(v)?)
    }

    pub fn ghost(&self, u: &WittVec<R::Elem>) -> Result<Vec<R::Elem>> {
        self.check(u)?;
        Ok((1..=self.m).map(|i| ghost_component(&self.base, self.p, &u.comps, i)).collect())
    }

    /// Componentwise p-th power; requires characteristic `p`.
    pub fn frobenius(&self, u: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.check(u)?;
        if self.base.characteristic() != Some(self.p) {
            return Err(Error::PreconditionViolation("Frobenius needs a ring of characteristic p".into()));
        }
        Ok(WittVec::new(u.comps.iter().map(|c| self.base.pow(c, self.p as u64)).collect()))
    }

    /// `x ↦ F(x) - x`.
    pub fn asw_operator(&self, u: &WittVec<R::Elem>) -> Result<WittVec<R::Elem>> {
        self.sub(&self.frobenius(u)?, u)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitShiftReport {
    pub p: u8,
    pub m: usize,
    /// `h_i = s_i - x_i` as text.
    pub h: Vec<String>,
    /// `h_i` lies in the ideal `(a)`.
    pub in_ideal: Vec<bool>,
    /// `h_i` involves only `a, x_1, ..., x_{i-1}`.
    pub lower_only: Vec<bool>,
    pub ok: bool,
    #[serde(skip)]
    pub polys: Vec<IntPoly>,
}

/// Computes `s = x + (a, 0, ..., 0)` over `F_p[a, x_1, ..., x_m]` and checks
/// `s_i - x_i ∈ a F_p[a, x_1, ..., x_{i-1}]`.
pub fn split_shift_check(p: u8, m: usize) -> Result<SplitShiftReport> {
    let nvars = m + 1;
    let ring = IntMod { p, nvars };
    let w = Witt::new(ring, p, m)?;
    let x = WittVec::new((1..=m).map(|j| IntPoly::var(nvars, j)).collect());
    let a = w.teichmuller_like(IntPoly::var(nvars, 0));
    let s = w.add(&x, &a)?;
    let names = split_var_names(m);
    let polys: Vec<IntPoly> = (0..m).map(|k| s.comps[k].sub(&x.comps[k]).reduce_mod(p as u64)).collect();
    let in_ideal: Vec<bool> = polys.iter().map(|h| h.divisible_by_var(0)).collect();
    let lower_only: Vec<bool> = polys.iter().enumerate().map(|(k, h)| h.max_var().is_none_or(|v| v <= k)).collect();
    let ok = in_ideal.iter().chain(&lower_only).all(|&b| b);
    Ok(SplitShiftReport {
        p,
        m,
        h: polys.iter().map(|h| h.fmt_with(&names)).collect(),
        in_ideal,
        lower_only,
        ok,
        polys,
    })
}

/// `a, x1, ..., xm`.
pub fn split_var_names(m: usize) -> Vec<String> {
    std::iter::once("a".to_string()).chain((1..=m).map(|j| format!("x{j}"))).collect()
}

impl<E> From<Vec<E>> for WittVec<E> {
    fn from(v: Vec<E>) -> Self {
        WittVec::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> IntPoly {
        IntPoly::var(BINARY_VARS, i)
    }

    #[test]
    fn sum_polys_p2_p3() {
        let s = universal_sum_polys(2, 2).unwrap();
        assert_eq!(s[0], v(0).add(&v(1)));
        assert_eq!(s[1], v(2).add(&v(3)).sub(&v(0).mul(&v(1))));
        let s = universal_sum_polys(3, 2).unwrap();
        let cross = v(0).pow(2).mul(&v(1)).add(&v(0).mul(&v(1).pow(2)));
        assert_eq!(s[1], v(2).add(&v(3)).sub(&cross));
        assert_eq!(universal_sum_polys(5, 1).unwrap()[0], v(0).add(&v(1)));
    }

    #[test]
    fn char_p_addition() {
        let ring = IntMod { p: 2, nvars: 3 };
        let w = Witt::new(ring, 2, 2).unwrap();
        let x = WittVec::new(vec![IntPoly::var(3, 1), IntPoly::var(3, 2)]);
        let a = w.teichmuller_like(IntPoly::var(3, 0));
        let s = w.add(&x, &a).unwrap();
        assert_eq!(s.comps[0], IntPoly::var(3, 1).add(&IntPoly::var(3, 0)));
        assert_eq!(s.comps[1], IntPoly::var(3, 2).add(&IntPoly::var(3, 0).mul(&IntPoly::var(3, 1))));
        assert_eq!(w.add(&x, &w.zero()).unwrap(), x);
    }

    #[test]
    fn split_shift_small() {
        let r = split_shift_check(2, 2).unwrap();
        assert_eq!(r.h, vec!["a", "a*x1"]);
        assert!(r.ok);
        let r = split_shift_check(3, 2).unwrap();
        let n = 3;
        let a = IntPoly::var(n, 0);
        let x1 = IntPoly::var(n, 1);
        let want = a.mul(&x1.pow(2)).add(&a.pow(2).mul(&x1)).neg().reduce_mod(3);
        assert_eq!(r.polys[1], want);
    }

    #[test]
    fn asw_length_one_and_zero() {
        let k = FieldCtx::new(2, 1).unwrap();
        let w = Witt::new(k, 2, 1).unwrap();
        let c = k.s(1).add(&k.t());
        let out = w.asw_operator(&WittVec::new(vec![c.clone()])).unwrap();
        assert_eq!(out.comps[0], c.mul(&c).sub(&c));
        let w3 = Witt::new(k, 2, 3).unwrap();
        assert_eq!(w3.asw_operator(&w3.zero()).unwrap(), w3.zero());
    }

    #[test]
    fn tuple_parser() {
        let mut names = Vec::new();
        let t = parse_int_tuple("(x1 + 2*a^2, -x2*(a - 1))", &mut names).unwrap();
        assert_eq!(names, vec!["x1", "a", "x2"]);
        let p0 = t[0].1.to_poly(3);
        assert_eq!(p0.fmt_with(&names), "x1 + 2*a^2");
        assert!(parse_int_tuple("(x1, $)", &mut names).is_err());
    }
}
