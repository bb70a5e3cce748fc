//! The t-adic valuation on `K`, optimal representatives of Artin-Schreier
//! cosets, and the ramification classifier.

mod newton;

pub use newton::{newton_slopes, NewtonSegment};

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::scalar::solve_mod_p;
use crate::algebra::{FieldCtx, FieldElem, Monomial, SparsePoly};
use crate::error::{Error, Result};

/// A valuation value: a rational number, or `+inf` for zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Valuation {
    Finite(Rational64),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Rational64::from_integer(v))
    }

    pub fn finite(self) -> Option<Rational64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_positive(self) -> bool {
        self > Valuation::int(0)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Integer t-adic order; `None` for zero.
pub fn ord_t(ctx: &FieldCtx, x: &FieldElem) -> Option<i64> {
    x.order_in(ctx.t_index())
}

pub fn valuation(ctx: &FieldCtx, x: &FieldElem) -> Valuation {
    ord_t(ctx, x).map_or(Valuation::Infinite, Valuation::int)
}

/// Coefficient of the lowest power of `t` in the Laurent expansion of `x`,
/// as an element of `k` (no `t`). Zero for `x = 0`.
pub fn leading_coeff(ctx: &FieldCtx, x: &FieldElem) -> FieldElem {
    if x.is_zero() {
        return ctx.zero();
    }
    let t = ctx.t_index();
    let n = x.num().coeff_of_power(t, x.num().order_in(t).unwrap());
    let d = x.den().coeff_of_power(t, x.den().order_in(t).unwrap());
    FieldElem::from_fraction(n, d).expect("nonzero leading coefficient")
}

/// Residue in `k` of an element with `v(x) >= 0`.
pub fn residue(ctx: &FieldCtx, x: &FieldElem) -> Result<FieldElem> {
    match ord_t(ctx, x) {
        None => Ok(ctx.zero()),
        Some(v) if v < 0 => Err(Error::NegativeValuation),
        Some(0) => Ok(leading_coeff(ctx, x)),
        Some(_) => Ok(ctx.zero()),
    }
}

/// `x^p - x`.
pub fn wp(x: &FieldElem) -> Result<FieldElem> {
    Ok(x.frobenius_power(1)?.sub(x))
}

/// Ramification class of a degree-p Artin-Schreier step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum RamClass {
    Wild,
    Ferocious,
    Unramified,
    Split,
}

/// An optimal representative `alpha_opt = alpha + shift^p - shift`.
#[derive(Clone, PartialEq, Debug)]
pub struct OptimalForm {
    pub alpha_opt: FieldElem,
    pub shift: FieldElem,
    pub v_alpha: Valuation,
}

/// Largest `|v|` the reduction will walk through.
pub fn default_budget(p: u8) -> u64 {
    2 * (p as u64).pow(20)
}

pub fn reduce_to_optimal(ctx: &FieldCtx, alpha: &FieldElem) -> Result<OptimalForm> {
    reduce_to_optimal_with_budget(ctx, alpha, default_budget(ctx.p))
}

/// Strips leading p-th powers from `alpha` until it is optimal. Every step
/// raises the valuation, so the number of steps is bounded by `|v(alpha)| + 1`;
/// inputs whose pole order exceeds `budget` are refused.
pub fn reduce_to_optimal_with_budget(ctx: &FieldCtx, alpha: &FieldElem, budget: u64) -> Result<OptimalForm> {
    let p = ctx.p as i64;
    let mut a = alpha.clone();
    let mut shift = ctx.zero();
    let mut steps = 0usize;
    while let Some(v) = ord_t(ctx, &a) {
        if v.unsigned_abs() > budget {
            return Err(Error::PrecisionExceeded(steps));
        }
        let delta = if v < 0 && v % p == 0 {
            match leading_coeff(ctx, &a).pth_root() {
                Ok(d) => d.mul(&ctx.t_pow(v / p)),
                Err(_) => break,
            }
        } else if v == 0 {
            match as_p_image_in_k(ctx, &leading_coeff(ctx, &a)) {
                Some(b) => b,
                None => break,
            }
        } else {
            break;
        };
        a = a.sub(&wp(&delta)?);
        shift = shift.sub(&delta);
        steps += 1;
    }
    let v_alpha = valuation(ctx, &a);
    Ok(OptimalForm { alpha_opt: a, shift, v_alpha })
}

/// Decides whether `g in k` equals `b^p - b` for some `b in k`, returning
/// such a `b`.
///
/// In lowest terms `b = c/d` forces `g = (c^p - c d^{p-1}) / d^p`, so the
/// denominator of `g` must be a p-th power and `c` solves a system that is
/// linear over `F_p` in the coefficients of `c`.
pub fn as_p_image_in_k(ctx: &FieldCtx, g: &FieldElem) -> Option<FieldElem> {
    if g.is_zero() {
        return Some(ctx.zero());
    }
    let t = ctx.t_index();
    if g.num().degree_in(t) != Some(0) || g.den().degree_in(t) != Some(0) {
        return None;
    }
    let g = g.reduced();
    let d = g.den().pth_root()?;
    let num = g.num();
    let p = ctx.p as i64;
    let dp1 = d.pow(p as u64 - 1);
    let bounds: Vec<i64> = (0..ctx.r)
        .map(|j| {
            let dn = num.degree_in(j).unwrap_or(0);
            let dd = d.degree_in(j).unwrap_or(0);
            (dn / p).max(dd)
        })
        .collect();
    let mut unknowns: Vec<Monomial> = vec![Monomial::from_elem(0, ctx.nvars())];
    for (j, &b) in bounds.iter().enumerate() {
        let mut next = Vec::new();
        for m in &unknowns {
            for e in 0..=b {
                let mut m2 = m.clone();
                m2[j] = e;
                next.push(m2);
            }
        }
        unknowns = next;
    }
    if unknowns.len() > 20_000 {
        return None;
    }
    let images: Vec<SparsePoly> = unknowns
        .iter()
        .map(|m| {
            let c = SparsePoly::monomial(m.clone(), 1, ctx.p);
            c.pow(p as u64).sub(&c.mul(&dp1))
        })
        .collect();
    let mut rows: Vec<Monomial> = images.iter().flat_map(|im| im.terms().map(|(m, _)| m.clone())).collect();
    rows.extend(num.terms().map(|(m, _)| m.clone()));
    rows.sort();
    rows.dedup();
    let index = |m: &Monomial| rows.binary_search(m).unwrap();
    let mut a = vec![vec![0u8; unknowns.len()]; rows.len()];
    for (col, im) in images.iter().enumerate() {
        for (m, c) in im.terms() {
            a[index(m)][col] = c;
        }
    }
    let mut rhs = vec![0u8; rows.len()];
    for (m, c) in num.terms() {
        rhs[index(m)] = c;
    }
    let sol = solve_mod_p(a, rhs, unknowns.len(), ctx.p)?;
    let c = SparsePoly::from_terms(ctx.p, ctx.nvars(), unknowns.into_iter().zip(sol).filter(|(_, c)| *c != 0));
    FieldElem::from_fraction(c, d).ok()
}

/// Reduces to an optimal representative and reads off the class from its
/// valuation.
pub fn classify(ctx: &FieldCtx, alpha: &FieldElem) -> Result<(OptimalForm, RamClass)> {
    let opt = reduce_to_optimal(ctx, alpha)?;
    let class = match ord_t(ctx, &opt.alpha_opt) {
        Some(v) if v < 0 && v % ctx.p as i64 != 0 => RamClass::Wild,
        Some(v) if v < 0 => RamClass::Ferocious,
        Some(0) => RamClass::Unramified,
        _ => RamClass::Split,
    };
    Ok((opt, class))
}

/// Outcome of trying to prove that `x^p - x = alpha` has no root in `K`.
#[derive(Clone, PartialEq, Debug)]
pub enum Nontriviality {
    /// The optimal form is wild, ferocious or unramified, so `alpha` is not
    /// in `P(K)`.
    Certified { class: RamClass, optimal: OptimalForm },
    /// The reduction reached zero: `witness^p - witness = alpha`.
    InPImage { witness: FieldElem },
    /// Positive optimal valuation; valuation data alone does not decide.
    Undetermined { optimal: OptimalForm },
}

pub fn proves_nontrivial(ctx: &FieldCtx, alpha: &FieldElem) -> Result<Nontriviality> {
    let (optimal, class) = classify(ctx, alpha)?;
    if optimal.alpha_opt.is_zero() {
        return Ok(Nontriviality::InPImage { witness: optimal.shift.neg() });
    }
    Ok(match class {
        RamClass::Split => Nontriviality::Undetermined { optimal },
        class => Nontriviality::Certified { class, optimal },
    })
}

/// Whether two Artin-Schreier generators define the same degree-p
/// extension.
#[derive(Clone, PartialEq, Debug)]
pub enum Equivalence {
    /// For every `c` in `F_p^x`, `a - c b` was certified outside `P(K)`.
    NonEquivalent {
        certificates: Vec<(u8, RamClass, OptimalForm)>,
    },
    /// `a - c b = w^p - w`.
    Equivalent {
        c: u8,
        witness: FieldElem,
    },
    Undetermined,
}

pub fn as_equivalent(ctx: &FieldCtx, a: &FieldElem, b: &FieldElem) -> Result<Equivalence> {
    let mut certificates = Vec::new();
    let mut undetermined = false;
    for c in 1..ctx.p {
        match proves_nontrivial(ctx, &a.sub(&b.scale(c as i64)))? {
            Nontriviality::Certified { class, optimal } => certificates.push((c, class, optimal)),
            Nontriviality::InPImage { witness } => return Ok(Equivalence::Equivalent { c, witness }),
            Nontriviality::Undetermined { .. } => undetermined = true,
        }
    }
    if undetermined {
        return Ok(Equivalence::Undetermined);
    }
    Ok(Equivalence::NonEquivalent { certificates })
}
