//! Inductive construction of weave towers and their certificates.
//!
//! Level `i` adjoins `x_i^p - x_i = u_i + alpha_{i-1}^{p^N}` with
//! `u_i = t^{-p^{l_i}} u_{a(i)}`, and records a generator `z_i` with
//! `z_i^p - gamma1 z_i = z_{a(i)} + gamma2`.

pub mod faults;
mod json;
mod verify;

use std::collections::BTreeMap;

use crate::algebra::{FieldCtx, FieldElem, PRing};
use crate::error::{Error, Result};
use crate::gene::{sigma_sum, Antecedent, GeneWord, Letter, TargetResidue};
use crate::special_poly::{choose_l, reduce_special, LConstraint, SpecialPoly, Witness};
use crate::tower::{AlbertData, LevelRing, Tower, TowerElem, ValuationOracle};
use crate::valued_field::{as_equivalent, Equivalence, Valuation};

pub use verify::{verify_weave, Check, Failure, LevelReport, VerificationReport};

/// Data recorded when level `i` repeats an earlier letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub h: Witness<TowerElem>,
    pub eta: Witness<TowerElem>,
    pub s: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCert {
    pub l: u32,
    /// `u_i`, at level `i-1`.
    pub u: TowerElem,
    /// `u_i + alpha_{i-1}^{p^N}`, at level `i-1`.
    pub rhs: TowerElem,
    /// Albert data of `L_{i-1}/K`.
    pub albert: AlbertData,
    /// `x_i` as a special polynomial in `z_i` over `L_{i-1}`.
    pub x_from_z: SpecialPoly<TowerElem>,
    pub z: TowerElem,
    pub gamma1: TowerElem,
    pub gamma2: TowerElem,
    pub reduction: Option<Reduction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeaveCertificate {
    pub p: u8,
    pub r: usize,
    pub word: GeneWord,
    pub big_n: u32,
    pub levels: Vec<LevelCert>,
}

impl WeaveCertificate {
    pub fn ctx(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p as u64, self.r)
    }

    pub fn to_json(&self) -> Result<String> {
        json::to_json(self, None)
    }

    /// Serializes with a `verification` section attached.
    pub fn to_json_with_report(&self, report: &VerificationReport) -> Result<String> {
        json::to_json(self, Some(report))
    }

    pub fn from_json(src: &str) -> Result<Self> {
        json::from_json(src)
    }
}

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    /// Defaults to `Σ(n) + 1`.
    pub big_n: Option<u32>,
    /// Fixed `l_i` for selected levels (1-based).
    pub l: BTreeMap<usize, u32>,
}

/// `z_g` for a letter at its first occurrence: `s_a` or `1/t`.
pub fn initial_z(ctx: &FieldCtx, g: Letter) -> FieldElem {
    match g {
        Letter::F(a) => ctx.s(a),
        Letter::W => ctx.t_pow(-1),
    }
}

/// `R_j = f_j(n)` for every variable.
pub fn residue_exponents(word: &GeneWord, r: usize) -> Vec<u32> {
    let target = word.residue_target();
    (1..=r).map(|j| target.get(&j).copied().unwrap_or(0)).collect()
}

fn t_power(ctx: &FieldCtx, k: u32) -> Result<FieldElem> {
    let e = (ctx.p as i64).checked_pow(k).ok_or(Error::ExponentOverflow)?;
    Ok(ctx.t_pow(e))
}

fn precedes(ring: &LevelRing<'_>, a: &TowerElem, b: &TowerElem) -> bool {
    ring.valuation(a) < ring.valuation(b)
}

/// Builds the tower described by `word` together with a full certificate.
pub fn build_weave(word: &GeneWord, p: u8, r: usize, opts: &BuildOptions) -> Result<WeaveCertificate> {
    let ctx = FieldCtx::new(p as u64, r)?;
    word.validate(p, r)?;
    let n = word.len();
    if n == 0 {
        return Err(Error::InvalidGene("empty word".into()));
    }
    let sig = sigma_sum(n) as u32;
    let big_n = opts.big_n.unwrap_or(sig + 1);
    if big_n <= sig {
        return Err(Error::PreconditionViolation(format!("N = {big_n} must exceed Σ({n}) = {sig}")));
    }
    if let Some(&i) = opts.l.keys().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let mut tower = Tower::new(ctx);
    let mut oracle = ValuationOracle::new(ctx, residue_exponents(word, r));
    let mut levels: Vec<LevelCert> = Vec::new();
    let t_inv = ctx.t_pow(-1);

    for i in 1..=n {
        let albert = tower.albert_element(i - 1)?;
        let alpha_pn = tower.frobenius_power(&albert.alpha, big_n)?;
        let delta = if i == 1 { tower.one(0) } else { tower.frobenius_power(&albert.beta, big_n)? };
        let letter = word.letter(i)?;
        let ring = LevelRing { tower: &tower, oracle: Some(&oracle), level: i - 1 };
        let m_i = big_n - sigma_sum(i) as u32;

        let level = match word.antecedent(i)? {
            Antecedent::First(g) => {
                let floor = if i == 1 { big_n } else { big_n + 1 };
                let cons: Vec<LConstraint<TowerElem>> = vec![(1, ring.zero(), alpha_pn.clone())];
                let l = match opts.l.get(&i) {
                    Some(&l) => {
                        let big_t = tower.base(t_power(&ctx, l)?.inv()?, i - 1);
                        if l < floor || !precedes(&ring, &big_t, &alpha_pn) && !alpha_pn.is_zero() {
                            return Err(Error::PreconditionViolation(format!(
                                "l_{i} = {l} violates the level constraints"
                            )));
                        }
                        l
                    }
                    None => choose_l(&ring, &t_inv, &ring.one(), 0, &cons, floor)?,
                };
                let big_t = t_power(&ctx, l)?.inv()?;
                let u = tower.base(big_t.mul(&initial_z(&ctx, g)), i - 1);
                let rhs = u.add(&alpha_pn);
                let x_from_z = SpecialPoly::new(
                    &ring,
                    m_i,
                    i as u32,
                    Witness::zero(&ring),
                    BTreeMap::from([(0, Witness { root: tower.base(t_inv.clone(), i - 1), exp: l - 1 })]),
                )?;
                tower.push_level(rhs.clone(), delta)?;
                let z = tower.x(i, i).scale(&t_power(&ctx, l - 1)?);
                let gamma1 = tower.base(t_power(&ctx, l)?.div(&t_power(&ctx, l - 1)?)?, i - 1);
                let gamma2 = alpha_pn.scale(&t_power(&ctx, l)?);
                LevelCert { l, u, rhs, albert, x_from_z, z, gamma1, gamma2, reduction: None }
            }
            Antecedent::Index(a) => {
                let prev = &levels[a - 1];
                let f = prev.x_from_z.map(|e| e.lift(i - 1)).weaken(
                    &ring,
                    big_n - sigma_sum(i - 1) as u32,
                    i as u32 - 1,
                )?;
                let alpha1 = Witness { root: prev.albert.alpha.lift(i - 1), exp: big_n };
                let alpha2 = Witness { root: albert.alpha.clone(), exp: big_n };
                let (b, cons, s) = repeat_constraints(&ring, &f, &alpha1, &alpha2)?;
                let floor = big_n + 1;
                let fixed = opts.l.get(&i).copied();
                let mut l = match fixed {
                    Some(l) if l < floor => {
                        return Err(Error::PreconditionViolation(format!("l_{i} = {l} must exceed N = {big_n}")));
                    }
                    Some(l) => l,
                    None => choose_l(&ring, &t_inv, &b, s, &cons, floor)?,
                };
                let red = loop {
                    let red = reduce_special(&ring, &f, &alpha1, &alpha2, &t_inv, l, big_n)?;
                    let h = red.h.value(&ring)?;
                    let eta = red.eta.value(&ring)?;
                    let dominant = precedes(&ring, &h, &ring.one()) && (eta.is_zero() || precedes(&ring, &h, &eta));
                    if dominant {
                        break red;
                    }
                    if fixed.is_some() {
                        return Err(Error::PreconditionViolation(format!(
                            "l_{i} = {l} too small: h does not dominate"
                        )));
                    }
                    l += 1;
                };
                let big_t = t_power(&ctx, l)?.inv()?;
                let u = prev.u.lift(i - 1).scale(&big_t);
                let rhs = u.add(&alpha_pn);
                let h_root = red.h.root(&ring, 1)?;
                let h_root_inv = h_root.inv(&ring)?;
                let mut gamma1_w = Witness::one(&ring);
                for _ in 1..p {
                    gamma1_w = gamma1_w.mul(&h_root_inv, &ring)?;
                }
                let gamma2_w = red.eta.mul(&red.h.inv(&ring)?, &ring)?;
                let gamma1 = gamma1_w.value(&ring)?;
                let gamma2 = gamma2_w.value(&ring)?;
                // z_a = z_i^p - gamma1 z_i - gamma2
                let q = SpecialPoly::new(
                    &ring,
                    m_i,
                    1,
                    gamma2_w.neg(&ring),
                    BTreeMap::from([(0, gamma1_w.neg(&ring)), (1, Witness::one(&ring))]),
                )?;
                let composed = red.g.compose(&q, &ring)?;
                let mut coeffs = composed.coeffs.clone();
                let c0 = composed.coeff(0, &ring).add(&h_root, &ring)?;
                coeffs.insert(0, c0);
                let x_from_z =
                    SpecialPoly::new(&ring, composed.m.min(m_i), composed.n.max(1), composed.constant.clone(), coeffs)?
                        .weaken(&ring, m_i, i as u32)?;
                let g_lifted = red.g.map(|e| e.lift(i));
                let h_root_inv_v = h_root_inv.value(&ring)?;
                tower.push_level(rhs.clone(), delta)?;
                let top = LevelRing { tower: &tower, oracle: None, level: i };
                let za = oracle.z(a).lift(i);
                let y = tower.x(i, i).sub(&g_lifted.eval(&za, &top)?);
                let z = tower.mul(&y, &h_root_inv_v.lift(i));
                let reduction = Some(Reduction { h: red.h, eta: red.eta, s: red.s });
                LevelCert { l, u, rhs, albert, x_from_z, z, gamma1, gamma2, reduction }
            }
        };
        oracle.push_level(&tower, &level.z, &level.gamma1, letter)?;
        levels.push(level);
    }
    Ok(WeaveCertificate { p, r, word: word.clone(), big_n, levels })
}

type RepeatData = (TowerElem, Vec<LConstraint<TowerElem>>, u32);

/// The comparison data that makes `h` dominate: `b = (-b_s)^{1/p^s}`,
/// against `1`, `eta` and the higher terms of `h`.
fn repeat_constraints(
    ring: &LevelRing<'_>,
    f: &SpecialPoly<TowerElem>,
    alpha1: &Witness<TowerElem>,
    alpha2: &Witness<TowerElem>,
) -> Result<RepeatData> {
    let n = f.n;
    let s =
        (0..=n).find(|&j| !f.coeff(j, ring).is_zero(ring)).ok_or_else(|| Error::Internal("f has no Z terms".into()))?;
    let b = f.coeff(s, ring).neg(ring).root(ring, s)?.value(ring)?;
    let c = &f.constant;
    let inner = c.frob().sub(c, ring)?.sub(alpha1, ring)?.root(ring, s + 1)?.value(ring)?;
    let mut cons = vec![(1, ring.zero(), ring.one()), (1, inner, alpha2.value(ring)?)];
    for j in s + 1..=n + 1 {
        let d = f.coeff(j - 1, ring).frob().sub(&f.coeff(j, ring), ring)?.root(ring, j)?.value(ring)?;
        cons.push((j - s, d, ring.zero()));
    }
    Ok((b, cons, s))
}

/// Residue extension realised by the tower: `s_a ↦ f_a(n)`.
pub fn residue_of_tower(cert: &WeaveCertificate) -> Result<TargetResidue> {
    let target = cert.word.residue_target();
    if !cert.word.is_admissible(&target) {
        return Err(Error::Internal("word is not admissible for its own residue".into()));
    }
    Ok(target)
}

/// Compares the first steps `a/t^{p^l}` and `a/t^{p^{l'}}` of two towers
/// (with `alpha_0 = 0`).
pub fn nonuniqueness_demo(ctx: &FieldCtx, a: &FieldElem, l: u32, l2: u32) -> Result<Equivalence> {
    let x = a.mul(&t_power(ctx, l)?.inv()?);
    let y = a.mul(&t_power(ctx, l2)?.inv()?);
    as_equivalent(ctx, &x, &y)
}

/// Rebuilds the tower and its valuation oracle from a certificate.
pub fn oracle_for(cert: &WeaveCertificate) -> Result<(Tower, ValuationOracle)> {
    let ctx = cert.ctx()?;
    let mut tower = Tower::new(ctx);
    let mut oracle = ValuationOracle::new(ctx, residue_exponents(&cert.word, cert.r));
    for (k, lv) in cert.levels.iter().enumerate() {
        let i = k + 1;
        let delta = if i == 1 { tower.one(0) } else { tower.frobenius_power(&lv.albert.beta, cert.big_n)? };
        tower.push_level(lv.rhs.clone(), delta)?;
        oracle.push_level(&tower, &lv.z, &lv.gamma1, cert.word.letter(i)?)?;
    }
    Ok((tower, oracle))
}

/// `v(z_i)` for every level.
pub fn z_valuations(cert: &WeaveCertificate) -> Result<Vec<Valuation>> {
    let (tower, oracle) = oracle_for(cert)?;
    Ok((1..=cert.levels.len()).map(|i| oracle.valuation(&tower, oracle.z(i))).collect())
}
