use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};

/// An element of `L_i` in the basis `x_1^{e_1} ... x_i^{e_i}`, `0 <= e_j < p`.
///
/// Coordinates are stored flat with mixed-radix index `sum e_j p^{j-1}`, so
/// the block of `x_i^k` is the slice `[k p^{i-1}, (k+1) p^{i-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElem {
    level: usize,
    coeffs: Vec<FieldElem>,
}

impl TowerElem {
    pub fn zero(ctx: &FieldCtx, level: usize) -> Self {
        let n = (ctx.p as usize).pow(level as u32);
        TowerElem { level, coeffs: vec![ctx.zero(); n] }
    }

    pub fn from_base(x: FieldElem, ctx: &FieldCtx, level: usize) -> Self {
        let mut u = Self::zero(ctx, level);
        u.coeffs[0] = x;
        u
    }

    pub fn from_coeffs(level: usize, coeffs: Vec<FieldElem>) -> Result<Self> {
        let p = coeffs.first().map_or(2, |c| c.p()) as usize;
        if coeffs.len() != p.pow(level as u32) {
            return Err(Error::DimensionMismatch(format!("{} coordinates at level {level}", coeffs.len())));
        }
        Ok(TowerElem { level, coeffs })
    }

    /// `x_i` viewed at `level >= i`.
    pub fn x(ctx: &FieldCtx, i: usize, level: usize) -> Self {
        assert!(i >= 1 && i <= level);
        let mut u = Self::zero(ctx, level);
        u.coeffs[(ctx.p as usize).pow(i as u32 - 1)] = ctx.one();
        u
    }

    /// Basis monomial with the given exponent vector.
    pub fn monomial(ctx: &FieldCtx, exps: &[u32], c: FieldElem) -> Self {
        let p = ctx.p as usize;
        let idx = exps.iter().rev().fold(0usize, |acc, &e| acc * p + e as usize);
        let mut u = Self::zero(ctx, exps.len());
        u.coeffs[idx] = c;
        u
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn p(&self) -> u8 {
        self.coeffs[0].p()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    /// True when all coordinates except the constant one vanish.
    pub fn is_base(&self) -> bool {
        self.coeffs[1..].iter().all(FieldElem::is_zero)
    }

    pub fn base_part(&self) -> &FieldElem {
        &self.coeffs[0]
    }

    /// Exponent vector of the basis monomial at a flat index.
    pub fn exps_of(&self, mut idx: usize) -> Vec<u32> {
        let p = self.p() as usize;
        (0..self.level)
            .map(|_| {
                let e = (idx % p) as u32;
                idx /= p;
                e
            })
            .collect()
    }

    /// Nonzero coordinates with their exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &FieldElem)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.exps_of(i), c))
    }

    fn block_len(&self) -> usize {
        self.coeffs.len() / self.p() as usize
    }

    /// Coefficient of `x_i^k` as an element of `L_{i-1}`.
    pub fn block(&self, k: usize) -> TowerElem {
        assert!(self.level >= 1);
        let b = self.block_len();
        TowerElem { level: self.level - 1, coeffs: self.coeffs[k * b..(k + 1) * b].to_vec() }
    }

    /// Splits into the coefficients of `1, x_i, ..., x_i^{p-1}`.
    pub fn blocks(&self) -> Vec<TowerElem> {
        (0..self.p() as usize).map(|k| self.block(k)).collect()
    }

    pub fn from_blocks(blocks: Vec<TowerElem>) -> TowerElem {
        let level = blocks[0].level + 1;
        let coeffs = blocks.into_iter().flat_map(|b| b.coeffs).collect();
        TowerElem { level, coeffs }
    }

    /// Largest `j` such that `x_j` occurs, i.e. the smallest level containing
    /// this element.
    pub fn effective_level(&self) -> usize {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            None | Some(0) => 0,
            Some(idx) => {
                let p = self.p() as usize;
                let mut l = 0;
                let mut m = idx;
                while m > 0 {
                    m /= p;
                    l += 1;
                }
                l
            }
        }
    }

    /// Views the element at a higher level.
    pub fn lift(&self, level: usize) -> TowerElem {
        assert!(level >= self.level, "cannot lift from {} to {}", self.level, level);
        let n = (self.p() as usize).pow(level as u32);
        let zero = self.coeffs[0].sub(&self.coeffs[0]);
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, zero);
        TowerElem { level, coeffs }
    }

    /// Restricts to a lower level, failing if higher coordinates are nonzero.
    pub fn restrict(&self, level: usize) -> Result<TowerElem> {
        let n = (self.p() as usize).pow(level as u32);
        if level > self.level || self.coeffs[n..].iter().any(|c| !c.is_zero()) {
            return Err(Error::LevelMismatch(self.level, level));
        }
        Ok(TowerElem { level, coeffs: self.coeffs[..n].to_vec() })
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        TowerElem { level: a.level, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TowerElem { level: self.level, coeffs: self.coeffs.iter().map(FieldElem::neg).collect() }
    }

    /// Multiplies every coordinate by a base-field element.
    pub fn scale(&self, c: &FieldElem) -> Self {
        TowerElem {
            level: self.level,
            coeffs: self.coeffs.iter().map(|x| if x.is_zero() { x.clone() } else { x.mul(c) }).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        TowerElem { level: self.level, coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        use std::cmp::Ordering::*;
        match self.level.cmp(&o.level) {
            Equal => (self.clone(), o.clone()),
            Less => (self.lift(o.level), o.clone()),
            Greater => (self.clone(), o.lift(self.level)),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let m = crate::expr::fmt_tower_monomial(&e);
                let c = c.fmt_with(names);
                let simple = !c.contains([' ', '/']);
                match (m.as_str(), c.as_str()) {
                    ("1", _) if simple => c,
                    ("1", _) => format!("({c})"),
                    (_, "1") => m,
                    _ if simple => format!("{c}*{m}"),
                    _ => format!("({c})*{m}"),
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl std::fmt::Display for TowerElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let nv = self.coeffs[0].nvars();
        let mut names: Vec<String> = (1..nv).map(|j| format!("s{j}")).collect();
        names.push("t".into());
        f.write_str(&self.fmt_with(&names))
    }
}
