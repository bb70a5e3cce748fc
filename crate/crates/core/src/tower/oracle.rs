//! Exact valuations and residues on a weave tower, computed in the
//! z-presentation `L_i = L_{i-1}[z_i]`.

use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{binom, Tower, TowerElem};
use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::gene::Letter;
use crate::valued_field::{self, Valuation};

pub type StepKind = Letter;

#[derive(Clone, Debug)]
struct ZLevel {
    z: TowerElem,
    kind: StepKind,
    c1_pows: Vec<TowerElem>,
    c0_pows: Vec<TowerElem>,
    w: TowerElem,
    nu: Rational64,
    zbar: Option<FieldElem>,
}

/// Valuation and residue oracle. Residues live in the ambient field
/// `F_p(σ_1, ..., σ_r)` with `s_j = σ_j^{p^{R_j}}`; the ambient field reuses
/// the variables of `K` with `t` absent.
#[derive(Clone, Debug)]
pub struct ValuationOracle {
    ctx: FieldCtx,
    rexp: Vec<u32>,
    levels: Vec<ZLevel>,
}

impl ValuationOracle {
    /// `rexp[j-1] = R_j`, the number of ferocious steps of type `s_j`.
    pub fn new(ctx: FieldCtx, rexp: Vec<u32>) -> Self {
        assert_eq!(rexp.len(), ctx.r);
        ValuationOracle { ctx, rexp, levels: Vec::new() }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn rexp(&self) -> &[u32] {
        &self.rexp
    }

    pub fn z(&self, i: usize) -> &TowerElem {
        &self.levels[i - 1].z
    }

    /// `v(z_i)`.
    pub fn nu(&self, i: usize) -> Rational64 {
        self.levels[i - 1].nu
    }

    /// Residue of `z_i` for a ferocious step.
    pub fn zbar(&self, i: usize) -> Option<&FieldElem> {
        self.levels[i - 1].zbar.as_ref()
    }

    /// `z_i^p - gamma1 z_i`, the right-hand side actually satisfied by `z_i`.
    pub fn w(&self, i: usize) -> &TowerElem {
        &self.levels[i - 1].w
    }

    /// Registers `z_i` (linear in `x_i` with coefficients in `L_{i-1}`)
    /// together with `gamma1`. The valuation data of the step is derived
    /// from `w = z_i^p - gamma1 z_i`, which must lie in `L_{i-1}`.
    pub fn push_level(&mut self, tower: &Tower, z: &TowerElem, gamma1: &TowerElem, kind: StepKind) -> Result<()> {
        let i = self.height() + 1;
        if z.level() != i {
            return Err(Error::LevelMismatch(z.level(), i));
        }
        let blocks = z.blocks();
        if blocks[2..].iter().any(|b| !b.is_zero()) || blocks[1].is_zero() {
            return Err(Error::Malformed(format!("z_{i} is not linear in x_{i}")));
        }
        let c1 = tower.inv(&blocks[1])?;
        let c0 = tower.mul(&blocks[0], &c1).neg();
        let w = tower
            .frobenius(z)?
            .sub(&tower.mul(&gamma1.lift(i), z))
            .restrict(i - 1)
            .map_err(|_| Error::Malformed(format!("z_{i}^p - gamma1 z_{i} is not in L_{}", i - 1)))?;
        let vw =
            self.valuation(tower, &w).finite().ok_or_else(|| Error::Malformed(format!("z_{i}^p = gamma1 z_{i}")))?;
        let p = self.ctx.p as i64;
        let (nu, zbar) = match kind {
            Letter::W => (vw / p, None),
            Letter::F(_) => {
                if vw != Rational64::from_integer(0) {
                    return Err(Error::ClassViolation(format!("ferocious step {i} has v(w) = {vw}")));
                }
                let r = self.residue(tower, &w)?;
                let root = r
                    .reduced()
                    .pth_root()
                    .map_err(|_| Error::ClassViolation(format!("residue at step {i} has no p-th root")))?;
                (Rational64::from_integer(0), Some(root))
            }
        };
        let c1_pows = tower.powers(&c1);
        let c0_pows = tower.powers(&c0);
        self.levels.push(ZLevel { z: z.clone(), kind, c1_pows, c0_pows, w, nu, zbar });
        Ok(())
    }

    /// Coordinates of `u` (level `i`) over `1, z_i, ..., z_i^{p-1}`.
    pub fn z_coords(&self, tower: &Tower, u: &TowerElem) -> Vec<TowerElem> {
        let i = u.level();
        let lv = &self.levels[i - 1];
        let p = self.ctx.p as usize;
        let ub = u.blocks();
        (0..p)
            .map(|k| {
                let mut acc = tower.zero(i - 1);
                for (e, ue) in ub.iter().enumerate().skip(k) {
                    let b = binom(e, k) % p as i64;
                    if b == 0 || ue.is_zero() {
                        continue;
                    }
                    let term = tower.mul(&tower.mul(ue, &lv.c1_pows[k]), &lv.c0_pows[e - k]);
                    acc = acc.add(&term.scale_int(b));
                }
                acc
            })
            .collect()
    }

    fn at_effective_level(u: &TowerElem) -> TowerElem {
        let l = u.effective_level();
        u.restrict(l).expect("effective level")
    }

    pub fn valuation(&self, tower: &Tower, u: &TowerElem) -> Valuation {
        let u = Self::at_effective_level(u);
        let i = u.level();
        if i == 0 {
            return valued_field::valuation(&self.ctx, u.base_part());
        }
        assert!(i <= self.height(), "no z-data for level {i}");
        let lv = &self.levels[i - 1];
        let coords = self.z_coords(tower, &u);
        coords
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let va = self.valuation(tower, a);
                match lv.kind {
                    Letter::W => va + Valuation::Finite(lv.nu * k as i64),
                    Letter::F(_) => va,
                }
            })
            .min()
            .unwrap()
    }

    /// Image of a residue in `k` inside the ambient field.
    pub fn embed_residue(&self, x: &FieldElem) -> Result<FieldElem> {
        let p = self.ctx.p as i64;
        let mut factors: Vec<i64> = self.rexp.iter().map(|&r| p.pow(r)).collect();
        factors.push(1);
        x.scale_exponents(&factors)
    }

    /// Residue of `u` with `v(u) >= 0` in the ambient field.
    pub fn residue(&self, tower: &Tower, u: &TowerElem) -> Result<FieldElem> {
        let v = self.valuation(tower, u);
        if v < Valuation::int(0) {
            return Err(Error::NegativeValuation);
        }
        if v > Valuation::int(0) {
            return Ok(self.ctx.zero());
        }
        let u = Self::at_effective_level(u);
        let i = u.level();
        if i == 0 {
            return self.embed_residue(&valued_field::residue(&self.ctx, u.base_part())?);
        }
        let lv = &self.levels[i - 1];
        let coords = self.z_coords(tower, &u);
        match (&lv.kind, &lv.zbar) {
            (Letter::W, _) => self.residue(tower, &coords[0]),
            (Letter::F(_), Some(zbar)) => {
                let mut acc = self.ctx.zero();
                let mut zk = self.ctx.one();
                for a in &coords {
                    if self.valuation(tower, a) == Valuation::int(0) {
                        acc = acc.add(&self.residue(tower, a)?.mul(&zk));
                    }
                    zk = zk.mul(zbar);
                }
                Ok(acc)
            }
            (Letter::F(_), None) => Err(Error::Internal("ferocious level without residue data".into())),
        }
    }

    /// Full coordinates over the monomials `z_1^{e_1} ... z_i^{e_i}`.
    pub fn to_z_basis(&self, tower: &Tower, u: &TowerElem) -> Result<BTreeMap<Vec<u32>, FieldElem>> {
        let i = u.level();
        if i > self.height() {
            return Err(Error::CertificateMissing(i));
        }
        let mut out = BTreeMap::new();
        if i == 0 {
            if !u.base_part().is_zero() {
                out.insert(Vec::new(), u.base_part().clone());
            }
            return Ok(out);
        }
        for (k, a) in self.z_coords(tower, u).iter().enumerate() {
            for (mut e, c) in self.to_z_basis(tower, a)? {
                e.push(k as u32);
                out.insert(e, c);
            }
        }
        Ok(out)
    }

    /// Inverse of [`ValuationOracle::to_z_basis`].
    pub fn from_z_basis(&self, tower: &Tower, coords: &BTreeMap<Vec<u32>, FieldElem>, level: usize) -> TowerElem {
        let mut acc = tower.zero(level);
        for (e, c) in coords {
            let mut term = tower.base(c.clone(), level);
            for (j, &ej) in e.iter().enumerate() {
                if ej > 0 {
                    term = tower.mul(&term, &tower.pow(&self.levels[j].z.lift(level), ej as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

/// Whether an ambient residue lies in the subfield `k(σ_j^{p^{e_j}})`, that
/// is, every `σ_j` exponent of its reduced form is divisible by `p^{e_j}`.
pub fn in_residue_subfield(x: &FieldElem, shifts: &[u32]) -> bool {
    let x = x.reduced();
    let p = x.p() as i64;
    [x.num(), x.den()]
        .iter()
        .all(|poly| poly.terms().all(|(m, _)| shifts.iter().enumerate().all(|(j, &e)| m[j] % p.pow(e) == 0)))
}
