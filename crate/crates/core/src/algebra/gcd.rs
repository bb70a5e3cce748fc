//! Multivariate gcd over `F_p` by recursive primitive remainder sequences.
//!
//! The gcd is only used to present fractions in lowest terms, so the
//! routine carries a work budget and gives up (returns `None`) on inputs
//! whose main-variable degree would make the remainder sequence dense.

use super::poly::{Monomial, SparsePoly};

const MAX_PRS_DEGREE: i64 = 256;

struct Budget(usize);

impl Budget {
    fn spend(&mut self, n: usize) -> Option<()> {
        self.0 = self.0.checked_sub(n)?;
        Some(())
    }
}

/// Monic gcd of `a` and `b`, or `None` if the work budget ran out.
pub fn gcd(a: &SparsePoly, b: &SparsePoly) -> Option<SparsePoly> {
    let mut budget = Budget(200_000);
    gcd_inner(a, b, &mut budget).map(|g| g.monic())
}

fn strip_content(a: &SparsePoly) -> (SparsePoly, Monomial) {
    let c = a.monomial_content().expect("nonzero");
    let neg: Vec<i64> = c.iter().map(|e| -e).collect();
    (a.shift(&neg).expect("content shift"), c)
}

fn main_var(a: &SparsePoly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.degree_in(v).unwrap_or(0) > 0)
}

fn gcd_inner(a: &SparsePoly, b: &SparsePoly, budget: &mut Budget) -> Option<SparsePoly> {
    budget.spend(a.len() + b.len())?;
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let (a1, ca) = strip_content(a);
    let (b1, cb) = strip_content(b);
    let mono: Monomial = ca.iter().zip(cb.iter()).map(|(x, y)| *x.min(y)).collect();
    let mono_poly = SparsePoly::monomial(mono, 1, a.p());
    let (va, vb) = (main_var(&a1), main_var(&b1));
    let core = match (va, vb) {
        (None, _) | (_, None) => SparsePoly::one(a.p(), a.nvars()),
        (Some(x), Some(y)) if x != y => {
            let v = x.max(y);
            let (has, other) = if x > y { (&a1, &b1) } else { (&b1, &a1) };
            let c = content_in(has, v, budget)?;
            gcd_inner(&c, other, budget)?
        }
        (Some(v), Some(_)) => {
            let ca = content_in(&a1, v, budget)?;
            let cb = content_in(&b1, v, budget)?;
            let pa = a1.div_exact(&ca)?;
            let pb = b1.div_exact(&cb)?;
            let gc = gcd_inner(&ca, &cb, budget)?;
            let gp = primitive_gcd(&pa, &pb, v, budget)?;
            gc.mul(&gp)
        }
    };
    Some(core.mul(&mono_poly))
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `v`.
fn content_in(a: &SparsePoly, v: usize, budget: &mut Budget) -> Option<SparsePoly> {
    let mut acc = SparsePoly::zero(a.p(), a.nvars());
    for c in a.coeffs_in(v).into_values() {
        acc = gcd_inner(&acc, &c, budget)?;
        if acc.as_constant().is_some_and(|c| c != 0) {
            break;
        }
    }
    Some(acc.monic())
}

fn exponent_stride(a: &SparsePoly, v: usize) -> i64 {
    a.terms().fold(0i64, |g, (m, _)| num_integer::gcd(g, m[v]))
}

fn primitive_gcd(a: &SparsePoly, b: &SparsePoly, v: usize, budget: &mut Budget) -> Option<SparsePoly> {
    let stride = num_integer::gcd(exponent_stride(a, v), exponent_stride(b, v));
    if stride > 1 {
        let mut up = vec![1i64; a.nvars()];
        let shrink = |x: &SparsePoly| {
            SparsePoly::from_terms(
                x.p(),
                x.nvars(),
                x.terms().map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2[v] /= stride;
                    (m2, c)
                }),
            )
        };
        up[v] = stride;
        let g = primitive_gcd(&shrink(a), &shrink(b), v, budget)?;
        return g.scale_exponents(&up).ok();
    }
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if f.degree_in(v).unwrap_or(0) > MAX_PRS_DEGREE {
        return None;
    }
    loop {
        if g.degree_in(v).unwrap_or(0) == 0 {
            return Some(SparsePoly::one(a.p(), a.nvars()));
        }
        let r = pseudo_rem(&f, &g, v, budget)?;
        if r.is_zero() {
            return Some(g);
        }
        let c = content_in(&r, v, budget)?;
        let r = r.div_exact(&c)?;
        f = g;
        g = r;
    }
}

fn pseudo_rem(a: &SparsePoly, b: &SparsePoly, v: usize, budget: &mut Budget) -> Option<SparsePoly> {
    let db = b.degree_in(v)?;
    let lb = b.lead_coeff_in(v);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(v).filter(|&d| d >= db && !r.is_zero()) {
        budget.spend(r.len() * b.len())?;
        let lr = r.lead_coeff_in(v);
        let mut shift = vec![0i64; a.nvars()];
        shift[v] = dr - db;
        let t = b.mul(&lr).shift(&shift).ok()?;
        r = r.mul(&lb).sub(&t);
    }
    Some(r)
}
