//! Arithmetic in a tower `K = L_0 ⊂ L_1 ⊂ ... ⊂ L_n` of Artin-Schreier
//! steps `x_i^p - x_i = rhs_i`, with a chosen generator of its Galois group.

mod elem;
pub mod oracle;

pub use elem::TowerElem;
pub use oracle::{StepKind, ValuationOracle};

use crate::algebra::linsolve::linear_solve;
use crate::algebra::ring::PRing;
use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::valued_field::Valuation;

#[derive(Clone, Debug)]
struct Level {
    rhs: TowerElem,
    delta: TowerElem,
    /// `(x_i + rhs_i)^k`, i.e. `(x_i^p)^k`, for `k < p`
    frob_pows: Vec<TowerElem>,
    /// `(x_i + delta_i)^k`, i.e. `sigma(x_i)^k`, for `k < p`
    sigma_pows: Vec<TowerElem>,
}

/// The Galois generator `sigma(x_j) = x_j + delta_j`, with `delta_j` in
/// `L_{j-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisGen {
    pub deltas: Vec<TowerElem>,
}

/// A trace-one element and an Albert element of `L_i / K`:
/// `Tr(beta) = 1` and `sigma(alpha) - alpha = beta^p - beta`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlbertData {
    pub beta: TowerElem,
    pub alpha: TowerElem,
}

#[derive(Clone, Debug)]
pub struct Tower {
    ctx: FieldCtx,
    levels: Vec<Level>,
}

impl Tower {
    pub fn new(ctx: FieldCtx) -> Self {
        Tower { ctx, levels: Vec::new() }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn p(&self) -> u8 {
        self.ctx.p
    }

    /// Number of Artin-Schreier steps.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn rhs(&self, i: usize) -> &TowerElem {
        &self.levels[i - 1].rhs
    }

    pub fn galois_gen(&self) -> GaloisGen {
        GaloisGen { deltas: self.levels.iter().map(|l| l.delta.clone()).collect() }
    }

    /// Adjoins `x^p - x = rhs` with `sigma(x) = x + delta`; both must live
    /// at the current top level.
    pub fn push_level(&mut self, rhs: TowerElem, delta: TowerElem) -> Result<usize> {
        let n = self.height();
        if rhs.level() != n || delta.level() != n {
            return Err(Error::LevelMismatch(rhs.level().max(delta.level()), n));
        }
        let i = n + 1;
        let x = TowerElem::x(&self.ctx, i, i);
        let fp = x.add(&rhs.lift(i));
        let sp = x.add(&delta.lift(i));
        self.levels.push(Level { rhs, delta, frob_pows: Vec::new(), sigma_pows: Vec::new() });
        let frob_pows = self.powers(&fp);
        let sigma_pows = self.powers(&sp);
        let lv = self.levels.last_mut().unwrap();
        lv.frob_pows = frob_pows;
        lv.sigma_pows = sigma_pows;
        Ok(i)
    }

    fn powers(&self, u: &TowerElem) -> Vec<TowerElem> {
        let mut out = vec![self.one(u.level())];
        for k in 1..self.p() as usize {
            out.push(self.mul(&out[k - 1], u));
        }
        out
    }

    pub fn zero(&self, level: usize) -> TowerElem {
        TowerElem::zero(&self.ctx, level)
    }

    pub fn one(&self, level: usize) -> TowerElem {
        self.base(self.ctx.one(), level)
    }

    pub fn base(&self, x: FieldElem, level: usize) -> TowerElem {
        TowerElem::from_base(x, &self.ctx, level)
    }

    pub fn x(&self, i: usize, level: usize) -> TowerElem {
        TowerElem::x(&self.ctx, i, level)
    }

    pub fn mul(&self, u: &TowerElem, v: &TowerElem) -> TowerElem {
        let level = u.level().max(v.level());
        self.mul_at(&u.lift(level), &v.lift(level))
    }

    fn mul_at(&self, u: &TowerElem, v: &TowerElem) -> TowerElem {
        let i = u.level();
        if i == 0 {
            return self.base(u.base_part().mul(v.base_part()), 0);
        }
        if u.is_base() {
            return v.scale(u.base_part());
        }
        if v.is_base() {
            return u.scale(v.base_part());
        }
        if u.effective_level() < i && v.effective_level() < i {
            let prod = self.mul_at(&u.block(0), &v.block(0));
            return prod.lift(i);
        }
        let p = self.p() as usize;
        let ub = u.blocks();
        let vb = v.blocks();
        let mut w: Vec<TowerElem> = vec![self.zero(i - 1); 2 * p - 1];
        for (a, ua) in ub.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in vb.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                w[a + b] = w[a + b].add(&self.mul_at(ua, vb));
            }
        }
        let rhs = &self.levels[i - 1].rhs;
        for m in (p..2 * p - 1).rev() {
            if w[m].is_zero() {
                continue;
            }
            let top = std::mem::replace(&mut w[m], self.zero(i - 1));
            w[m - p + 1] = w[m - p + 1].add(&top);
            w[m - p] = w[m - p].add(&self.mul_at(&top, rhs));
        }
        w.truncate(p);
        TowerElem::from_blocks(w)
    }

    pub fn pow(&self, u: &TowerElem, mut e: u64) -> TowerElem {
        let mut base = u.clone();
        let mut acc = self.one(u.level());
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

    /// `u^p`, by additivity: `(sum c_e x^e)^p = sum c_e^p (x^p)^e`.
    pub fn frobenius(&self, u: &TowerElem) -> Result<TowerElem> {
        let i = u.level();
        if i == 0 || u.is_base() {
            return Ok(self.base(u.base_part().frobenius_power(1)?, i));
        }
        if u.effective_level() < i {
            return Ok(self.frobenius(&u.block(0))?.lift(i));
        }
        let lv = &self.levels[i - 1];
        let mut acc = self.zero(i);
        for (k, b) in u.blocks().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let bp = self.frobenius(b)?;
            acc = acc.add(&self.mul_at(&bp.lift(i), &lv.frob_pows[k]));
        }
        Ok(acc)
    }

    /// `u^(p^e)` by `e` successive Frobenius steps.
    pub fn frobenius_power(&self, u: &TowerElem, e: u32) -> Result<TowerElem> {
        let mut out = u.clone();
        for _ in 0..e {
            out = self.frobenius(&out)?;
        }
        Ok(out)
    }

    /// `u^p - u`.
    pub fn wp(&self, u: &TowerElem) -> Result<TowerElem> {
        Ok(self.frobenius(u)?.sub(u))
    }

    /// The automorphism `x_i -> x_i + c` of `L_i / L_{i-1}`.
    fn tau(&self, u: &TowerElem, c: u8) -> TowerElem {
        let p = self.p() as usize;
        let blocks = u.blocks();
        let mut out = vec![self.zero(u.level() - 1); p];
        for (k, b) in blocks.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                let coef = binom(k, j) * (c as i64).pow((k - j) as u32);
                if coef % p as i64 != 0 {
                    *o = o.add(&b.scale_int(coef));
                }
            }
        }
        TowerElem::from_blocks(out)
    }

    /// Inverse through relative norms: `u^{-1} = (prod_{c != 0} tau_c u) / N(u)`.
    pub fn inv(&self, u: &TowerElem) -> Result<TowerElem> {
        let i = u.level();
        if u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if i == 0 || u.is_base() {
            return Ok(self.base(u.base_part().inv()?, i));
        }
        if u.effective_level() < i {
            return Ok(self.inv(&u.block(0))?.lift(i));
        }
        let mut conj = self.one(i);
        for c in 1..self.p() {
            conj = self.mul_at(&conj, &self.tau(u, c));
        }
        let norm = self.mul_at(u, &conj).restrict(i - 1).map_err(|_| Error::Internal("norm left L_{i-1}".into()))?;
        Ok(self.mul_at(&conj, &self.inv(&norm)?.lift(i)))
    }

    pub fn div(&self, u: &TowerElem, v: &TowerElem) -> Result<TowerElem> {
        Ok(self.mul(u, &self.inv(v)?))
    }

    /// `sigma(u)`.
    pub fn apply_sigma(&self, u: &TowerElem) -> TowerElem {
        let i = u.level();
        if i == 0 || u.is_base() {
            return u.clone();
        }
        if u.effective_level() < i {
            return self.apply_sigma(&u.block(0)).lift(i);
        }
        let lv = &self.levels[i - 1];
        let mut acc = self.zero(i);
        for (k, b) in u.blocks().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let sb = self.apply_sigma(b);
            acc = acc.add(&self.mul_at(&sb.lift(i), &lv.sigma_pows[k]));
        }
        acc
    }

    /// Order of `sigma` on `L_i`, found by iterating on the generators; `None`
    /// if it exceeds `p^i`.
    pub fn sigma_order(&self, i: usize) -> Option<u64> {
        let gens: Vec<TowerElem> = (1..=i).map(|j| self.x(j, i)).collect();
        let mut cur = gens.clone();
        let bound = (self.p() as u64).pow(i as u32);
        for k in 1..=bound {
            cur = cur.iter().map(|g| self.apply_sigma(g)).collect();
            if cur == gens {
                return Some(k);
            }
        }
        None
    }

    /// Checks `sigma(x_j)^p - sigma(x_j) = sigma(rhs_j)` for `j <= i`.
    pub fn sigma_well_defined(&self, i: usize) -> Result<bool> {
        for j in 1..=i {
            let sx = self.apply_sigma(&self.x(j, j));
            let lhs = self.wp(&sx)?;
            let rhs = self.apply_sigma(&self.rhs(j).lift(j));
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Tr_{L_i/K}(u) = sum_{j < p^i} sigma^j(u)`.
    pub fn trace_to_k(&self, u: &TowerElem, i: usize) -> Result<FieldElem> {
        let mut cur = u.lift(i);
        let mut acc = self.zero(i);
        for _ in 0..(self.p() as u64).pow(i as u32) {
            acc = acc.add(&cur);
            cur = self.apply_sigma(&cur);
        }
        if !acc.is_base() {
            return Err(Error::NotInBase);
        }
        Ok(acc.base_part().clone())
    }

    /// `beta_i = prod_{j <= i} (-x_j^{p-1})`, an element of trace one.
    pub fn trace_one_element(&self, i: usize) -> TowerElem {
        let p = self.p() as u32;
        let mut beta = self.one(i);
        for j in 1..=i {
            let mut exps = vec![0u32; i];
            exps[j - 1] = p - 1;
            let m = TowerElem::monomial(&self.ctx, &exps, self.ctx.constant(-1));
            beta = self.mul(&beta, &m);
        }
        beta
    }

    /// Solves `(sigma - id) alpha = beta^p - beta` on `L_i` in the monomial
    /// basis (free components zero) and re-verifies both identities.
    pub fn albert_element(&self, i: usize) -> Result<AlbertData> {
        if i == 0 {
            return Ok(AlbertData { beta: self.one(0), alpha: self.zero(0) });
        }
        let beta = self.trace_one_element(i);
        let rhs = self.wp(&beta)?;
        let dim = (self.p() as usize).pow(i as u32);
        let mut a = vec![vec![self.ctx.zero(); dim]; dim];
        for col in 0..dim {
            let mut e = self.zero(i);
            let mut coeffs = e.coeffs().to_vec();
            coeffs[col] = self.ctx.one();
            e = TowerElem::from_coeffs(i, coeffs)?;
            let img = self.apply_sigma(&e).sub(&e);
            for (row, c) in img.coeffs().iter().enumerate() {
                a[row][col] = c.clone();
            }
        }
        let sol = linear_solve(&a, rhs.coeffs()).map_err(|e| match e {
            Error::NoSolution => Error::Internal("Albert system inconsistent".into()),
            other => other,
        })?;
        let alpha = TowerElem::from_coeffs(i, sol)?;
        let data = AlbertData { beta, alpha };
        if !self.check_albert(&data, i)? {
            return Err(Error::Internal("Albert identities failed".into()));
        }
        Ok(data)
    }

    /// `Tr(beta) = 1` and `sigma(alpha) - alpha = beta^p - beta` on `L_i`.
    pub fn check_albert(&self, d: &AlbertData, i: usize) -> Result<bool> {
        if i == 0 {
            return Ok(true);
        }
        let tr = match self.trace_to_k(&d.beta, i) {
            Ok(t) => t,
            Err(Error::NotInBase) => return Ok(false),
            Err(e) => return Err(e),
        };
        let alpha = d.alpha.lift(i);
        let lhs = self.apply_sigma(&alpha).sub(&alpha);
        Ok(tr.is_one() && lhs == self.wp(&d.beta.lift(i))?)
    }

    /// Monic minimal polynomial over `K` of `u` in `L_1`, as coefficients
    /// `c_0, ..., c_p`, found by solving for `u^p` in terms of lower powers.
    pub fn min_poly_level1(&self, u: &TowerElem) -> Result<Vec<FieldElem>> {
        let u = u.lift(1);
        if u.level() != 1 {
            return Err(Error::LevelMismatch(u.level(), 1));
        }
        let p = self.p() as usize;
        let mut pows = vec![self.one(1)];
        for k in 1..=p {
            pows.push(self.mul(&pows[k - 1], &u));
        }
        let a: Vec<Vec<FieldElem>> =
            (0..p).map(|row| (0..p).map(|col| pows[col].coeffs()[row].clone()).collect()).collect();
        let c = linear_solve(&a, pows[p].coeffs())?;
        let mut out: Vec<FieldElem> = c.iter().map(FieldElem::neg).collect();
        out.push(self.ctx.one());
        Ok(out)
    }
}

/// One level of a tower as a [`PRing`]; elements are lifted to `level`.
/// Valuations require an oracle covering that level.
pub struct LevelRing<'a> {
    pub tower: &'a Tower,
    pub oracle: Option<&'a ValuationOracle>,
    pub level: usize,
}

impl PRing for LevelRing<'_> {
    type Elem = TowerElem;

    fn zero(&self) -> TowerElem {
        self.tower.zero(self.level)
    }
    fn one(&self) -> TowerElem {
        self.tower.one(self.level)
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        a.lift(self.level).add(&b.lift(self.level))
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        a.lift(self.level).neg()
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.tower.mul(&a.lift(self.level), &b.lift(self.level))
    }
    fn frob(&self, a: &TowerElem) -> Result<TowerElem> {
        self.tower.frobenius(&a.lift(self.level))
    }
    fn frob_n(&self, a: &TowerElem, e: u32) -> Result<TowerElem> {
        self.tower.frobenius_power(&a.lift(self.level), e)
    }
    fn inv(&self, a: &TowerElem) -> Result<TowerElem> {
        self.tower.inv(&a.lift(self.level))
    }
    fn base(&self, x: FieldElem) -> TowerElem {
        self.tower.base(x, self.level)
    }
    fn valuation(&self, a: &TowerElem) -> Valuation {
        self.oracle.expect("valuation oracle").valuation(self.tower, a)
    }
}

pub(crate) fn binom(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for j in 0..k {
        r = r * (n - j) as i64 / (j + 1) as i64;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_field;

    fn level1(p: u64, rhs: &str) -> (FieldCtx, Tower) {
        let ctx = FieldCtx::new(p, 1).unwrap();
        let mut tw = Tower::new(ctx);
        let r = parse_field(ctx, rhs).unwrap();
        tw.push_level(tw.base(r, 0), tw.one(0)).unwrap();
        (ctx, tw)
    }

    #[test]
    fn relation_reduction() {
        let (ctx, tw) = level1(2, "s1/t^4");
        let x = tw.x(1, 1);
        let u = parse_field(ctx, "s1/t^4").unwrap();
        assert_eq!(tw.mul(&x, &x), x.add(&tw.base(u.clone(), 1)));
        let x1 = x.add(&tw.one(1));
        assert_eq!(tw.mul(&x1, &x1), x.add(&tw.base(u, 1)).add(&tw.one(1)));
        assert_eq!(tw.mul(&tw.one(1), &x1), x1);
    }

    #[test]
    fn sigma_and_trace_level1() {
        let (ctx, tw) = level1(2, "s1/t^4");
        let x = tw.x(1, 1);
        assert_eq!(tw.apply_sigma(&x), x.add(&tw.one(1)));
        assert_eq!(tw.apply_sigma(&tw.base(ctx.s(1), 1)), tw.base(ctx.s(1), 1));
        assert_eq!(tw.trace_to_k(&x, 1).unwrap(), ctx.one());
        assert_eq!(tw.trace_to_k(&tw.base(ctx.s(1), 1), 1).unwrap(), ctx.zero());
        assert_eq!(tw.sigma_order(1), Some(2));
        assert_eq!(tw.trace_one_element(1), x);
        let (ctx3, tw3) = level1(3, "1/t");
        let b = tw3.trace_one_element(1);
        assert_eq!(b, TowerElem::monomial(&ctx3, &[2], ctx3.constant(2)));
        assert_eq!(tw3.trace_to_k(&b, 1).unwrap(), ctx3.one());
    }

    #[test]
    fn inverse_and_frobenius() {
        let (ctx, tw) = level1(3, "s1/t^3 + 1/t");
        let u = tw.x(1, 1).scale(&ctx.s(1)).add(&tw.base(ctx.t(), 1));
        let w = tw.mul(&u, &u).add(&tw.x(1, 1));
        let wi = tw.inv(&w).unwrap();
        assert_eq!(tw.mul(&w, &wi), tw.one(1));
        let f = tw.frobenius(&w).unwrap();
        assert_eq!(f, tw.pow(&w, 3));
    }

    #[test]
    fn albert_level1_and_frobenius_transport() {
        let (ctx, tw) = level1(2, "s1/t^4");
        let d = tw.albert_element(1).unwrap();
        assert!(tw.check_albert(&d, 1).unwrap());
        for n in 0..=3u32 {
            for c in ["0", "t", "s1"] {
                let c = tw.base(parse_field(ctx, c).unwrap(), 1);
                let a = tw.frobenius_power(&d.alpha, n).unwrap().add(&c);
                let b = tw.frobenius_power(&d.beta, n).unwrap();
                assert_eq!(tw.apply_sigma(&a).sub(&a), tw.wp(&b).unwrap());
            }
        }
    }

    #[test]
    fn min_poly_of_generator() {
        let (ctx, tw) = level1(2, "s1/t^4");
        let mp = tw.min_poly_level1(&tw.x(1, 1)).unwrap();
        let u = parse_field(ctx, "s1/t^4").unwrap();
        assert_eq!(mp, vec![u.neg(), ctx.constant(-1), ctx.one()]);
    }
}
