//! `{m,n}`-special polynomials `c + sum_{j<=n} a_j X^{p^j}` whose
//! coefficients carry explicit p-power witnesses, and the reduction lemmas
//! built on them.

use std::collections::BTreeMap;

use crate::algebra::{FieldElem, PRing};
use crate::error::{Error, Result};
use crate::valued_field::Valuation;

/// Exponent marking an element of `F_p`, which is a `p^e`-th power for all `e`.
pub const PRIME_FIELD: u32 = u32::MAX;

/// `root^(p^exp)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<E> {
    pub root: E,
    pub exp: u32,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Witness<E> {
    pub fn of<R: PRing<Elem = E>>(x: E) -> Self {
        Witness { root: x, exp: 0 }
    }

    pub fn zero<R: PRing<Elem = E>>(r: &R) -> Self {
        Witness { root: r.zero(), exp: PRIME_FIELD }
    }

    pub fn one<R: PRing<Elem = E>>(r: &R) -> Self {
        Witness { root: r.one(), exp: PRIME_FIELD }
    }

    pub fn is_zero<R: PRing<Elem = E>>(&self, r: &R) -> bool {
        r.is_zero(&self.root)
    }

    pub fn value<R: PRing<Elem = E>>(&self, r: &R) -> Result<E> {
        if self.exp == PRIME_FIELD {
            return Ok(self.root.clone());
        }
        r.frob_n(&self.root, self.exp)
    }

    /// Same value with exponent `k <= exp`.
    pub fn lower_to<R: PRing<Elem = E>>(&self, r: &R, k: u32) -> Result<Self> {
        if self.exp == PRIME_FIELD || r.is_zero(&self.root) {
            return Ok(Witness { root: self.root.clone(), exp: if self.exp == PRIME_FIELD { PRIME_FIELD } else { k } });
        }
        if k > self.exp {
            return Err(Error::InsufficientWitness { need: k, have: self.exp });
        }
        Ok(Witness { root: r.frob_n(&self.root, self.exp - k)?, exp: k })
    }

    fn common<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Result<(E, E, u32)> {
        let k = self.exp.min(o.exp);
        Ok((self.lower_to(r, k)?.root, o.lower_to(r, k)?.root, k))
    }

    pub fn add<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Result<Self> {
        if self.is_zero(r) {
            return Ok(o.clone());
        }
        if o.is_zero(r) {
            return Ok(self.clone());
        }
        let (a, b, k) = self.common(o, r)?;
        let root = r.add(&a, &b);
        Ok(Witness { exp: if r.is_zero(&root) { PRIME_FIELD } else { k }, root })
    }

    pub fn neg<R: PRing<Elem = E>>(&self, r: &R) -> Self {
        Witness { root: r.neg(&self.root), exp: self.exp }
    }

    pub fn sub<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Result<Self> {
        self.add(&o.neg(r), r)
    }

    pub fn mul<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Result<Self> {
        if self.is_zero(r) || o.is_zero(r) {
            return Ok(Self::zero(r));
        }
        let (a, b, k) = self.common(o, r)?;
        Ok(Witness { root: r.mul(&a, &b), exp: k })
    }

    /// The p-th power.
    pub fn frob(&self) -> Self {
        Witness { root: self.root.clone(), exp: if self.exp == PRIME_FIELD { PRIME_FIELD } else { self.exp + 1 } }
    }

    /// The `p^k`-th root.
    pub fn root<R: PRing<Elem = E>>(&self, r: &R, k: u32) -> Result<Self> {
        if self.exp == PRIME_FIELD || r.is_zero(&self.root) {
            return Ok(self.clone());
        }
        if k > self.exp {
            return Err(Error::InsufficientWitness { need: k, have: self.exp });
        }
        Ok(Witness { root: self.root.clone(), exp: self.exp - k })
    }

    pub fn inv<R: PRing<Elem = E>>(&self, r: &R) -> Result<Self> {
        Ok(Witness { root: r.inv(&self.root)?, exp: self.exp })
    }

    /// Maps the root into another ring (used to lift to higher levels).
    pub fn map<F, E2>(&self, f: F) -> Witness<E2>
    where
        F: Fn(&E) -> E2,
    {
        Witness { root: f(&self.root), exp: self.exp }
    }
}

/// `phi^(p^l)` as a witness, for `phi` in `K`.
pub fn base_power<R: PRing>(r: &R, phi: &FieldElem, l: u32) -> Witness<R::Elem> {
    Witness { root: r.base(phi.clone()), exp: l }
}

/// A p-linearized polynomial `c + sum_j a_j Z^{p^j}` with plain values.
#[derive(Clone, Debug, PartialEq)]
pub struct Linearized<E> {
    pub constant: E,
    pub coeffs: BTreeMap<u32, E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Linearized<E> {
    fn normalized<R: PRing<Elem = E>>(mut self, r: &R) -> Self {
        self.coeffs.retain(|_, c| !r.is_zero(c));
        self
    }

    pub fn add<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (j, c) in &o.coeffs {
            let e = coeffs.entry(*j).or_insert_with(|| r.zero());
            *e = r.add(e, c);
        }
        Linearized { constant: r.add(&self.constant, &o.constant), coeffs }.normalized(r)
    }

    pub fn neg<R: PRing<Elem = E>>(&self, r: &R) -> Self {
        Linearized {
            constant: r.neg(&self.constant),
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, r.neg(c))).collect(),
        }
    }

    pub fn sub<R: PRing<Elem = E>>(&self, o: &Self, r: &R) -> Self {
        self.add(&o.neg(r), r)
    }

    pub fn scale<R: PRing<Elem = E>>(&self, k: &E, r: &R) -> Self {
        Linearized {
            constant: r.mul(&self.constant, k),
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, r.mul(c, k))).collect(),
        }
        .normalized(r)
    }

    /// `f^p - f`, again linearized.
    pub fn wp<R: PRing<Elem = E>>(&self, r: &R) -> Result<Self> {
        let mut pth = BTreeMap::new();
        for (j, c) in &self.coeffs {
            pth.insert(j + 1, r.frob(c)?);
        }
        let fp = Linearized { constant: r.frob(&self.constant)?, coeffs: pth };
        Ok(fp.sub(self, r))
    }

    pub fn eval<R: PRing<Elem = E>>(&self, z: &E, r: &R) -> Result<E> {
        let mut acc = self.constant.clone();
        for (j, c) in &self.coeffs {
            acc = r.add(&acc, &r.mul(c, &r.frob_n(z, *j)?));
        }
        Ok(acc)
    }

    /// `a Z^{p^j}` plus a constant.
    pub fn term<R: PRing<Elem = E>>(a: E, j: u32, constant: E, r: &R) -> Self {
        Linearized { constant, coeffs: BTreeMap::from([(j, a)]) }.normalized(r)
    }
}

/// An `{m,n}`-special polynomial. Every witness has exponent at least `m`,
/// every key is at most `n`, and some coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialPoly<E> {
    pub m: u32,
    pub n: u32,
    pub constant: Witness<E>,
    pub coeffs: BTreeMap<u32, Witness<E>>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> SpecialPoly<E> {
    pub fn new<R: PRing<Elem = E>>(
        r: &R,
        m: u32,
        n: u32,
        constant: Witness<E>,
        coeffs: BTreeMap<u32, Witness<E>>,
    ) -> Result<Self> {
        let coeffs: BTreeMap<u32, Witness<E>> = coeffs.into_iter().filter(|(_, w)| !w.is_zero(r)).collect();
        if coeffs.is_empty() {
            return Err(Error::ClassViolation("all coefficients vanish".into()));
        }
        if let Some(j) = coeffs.keys().find(|&&j| j > n) {
            return Err(Error::ClassViolation(format!("term Z^(p^{j}) exceeds n = {n}")));
        }
        let low = std::iter::once(&constant).chain(coeffs.values()).map(|w| w.exp).min().unwrap();
        if low < m {
            return Err(Error::ClassViolation(format!("witness exponent {low} below m = {m}")));
        }
        Ok(SpecialPoly { m, n, constant, coeffs })
    }

    /// Coefficient of `Z^{p^j}` (zero when absent).
    pub fn coeff<R: PRing<Elem = E>>(&self, j: u32, r: &R) -> Witness<E> {
        self.coeffs.get(&j).cloned().unwrap_or_else(|| Witness::zero(r))
    }

    /// Plain values of all coefficients.
    pub fn values<R: PRing<Elem = E>>(&self, r: &R) -> Result<Linearized<E>> {
        let mut coeffs = BTreeMap::new();
        for (j, w) in &self.coeffs {
            coeffs.insert(*j, w.value(r)?);
        }
        Ok(Linearized { constant: self.constant.value(r)?, coeffs })
    }

    pub fn eval<R: PRing<Elem = E>>(&self, z: &E, r: &R) -> Result<E> {
        self.values(r)?.eval(z, r)
    }

    /// Regards the polynomial as `{m2,n2}`-special (`m2 <= m`, `n2 >= n`),
    /// moving surplus p-powers from the exponents into the roots.
    pub fn weaken<R: PRing<Elem = E>>(&self, r: &R, m2: u32, n2: u32) -> Result<Self> {
        if m2 > self.m || n2 < self.n {
            return Err(Error::ClassViolation(format!("cannot weaken {{{},{}}} to {{{m2},{n2}}}", self.m, self.n)));
        }
        let lower = |w: &Witness<E>| if w.exp == PRIME_FIELD { Ok(w.clone()) } else { w.lower_to(r, m2) };
        let coeffs = self.coeffs.iter().map(|(j, w)| Ok((*j, lower(w)?))).collect::<Result<_>>()?;
        Ok(SpecialPoly { m: m2, n: n2, constant: lower(&self.constant)?, coeffs })
    }

    /// `self ∘ f`, of class `{min(m1, m2), n1 + n2}`.
    pub fn compose<R: PRing<Elem = E>>(&self, f: &Self, r: &R) -> Result<Self> {
        let mut constant = self.constant.clone();
        let mut coeffs: BTreeMap<u32, Witness<E>> = BTreeMap::new();
        for (&j, a) in &self.coeffs {
            let mut cf = f.constant.clone();
            for _ in 0..j {
                cf = cf.frob();
            }
            constant = constant.add(&a.mul(&cf, r)?, r)?;
            for (&k, b) in &f.coeffs {
                let mut bj = b.clone();
                for _ in 0..j {
                    bj = bj.frob();
                }
                let term = a.mul(&bj, r)?;
                let slot = coeffs.remove(&(j + k)).unwrap_or_else(|| Witness::zero(r));
                coeffs.insert(j + k, slot.add(&term, r)?);
            }
        }
        SpecialPoly::new(r, self.m.min(f.m), self.n + f.n, constant, coeffs)
    }

    /// Transports the witnesses through a ring map.
    pub fn map<F, E2>(&self, f: F) -> SpecialPoly<E2>
    where
        F: Fn(&E) -> E2,
    {
        SpecialPoly {
            m: self.m,
            n: self.n,
            constant: self.constant.map(&f),
            coeffs: self.coeffs.iter().map(|(j, w)| (*j, w.map(&f))).collect(),
        }
    }
}

/// Result of [`root_shift`]: with `W = X - shift(Z)`, the relation
/// `X^p - X = a Z^{p^j} + b` becomes `W^p - W = a_root Z + b_root`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootShift<E> {
    pub shift_constant: Witness<E>,
    pub shift_coeffs: BTreeMap<u32, Witness<E>>,
    pub a_root: Witness<E>,
    pub b_root: Witness<E>,
}

/// `shift = sum_{k<j} a^{1/p^{j-k}} Z^{p^k} + sum_{i=1}^m b^{1/p^i}`.
pub fn root_shift<R: PRing>(
    r: &R,
    a: &Witness<R::Elem>,
    b: &Witness<R::Elem>,
    j: u32,
    m: u32,
) -> Result<RootShift<R::Elem>> {
    let mut shift_coeffs = BTreeMap::new();
    for k in 0..j {
        let c = a.root(r, j - k)?;
        if !c.is_zero(r) {
            shift_coeffs.insert(k, c);
        }
    }
    let mut shift_constant = Witness::zero(r);
    for i in 1..=m {
        shift_constant = shift_constant.add(&b.root(r, i)?, r)?;
    }
    Ok(RootShift { shift_constant, shift_coeffs, a_root: a.root(r, j)?, b_root: b.root(r, m)? })
}

impl<E: Clone + PartialEq + std::fmt::Debug> RootShift<E> {
    /// Checks the defining identity symbolically in `Z`.
    pub fn verify<R: PRing<Elem = E>>(&self, r: &R, a: &Witness<E>, b: &Witness<E>, j: u32) -> Result<bool> {
        let rel = Linearized::term(a.value(r)?, j, b.value(r)?, r);
        let mut coeffs = BTreeMap::new();
        for (k, w) in &self.shift_coeffs {
            coeffs.insert(*k, w.value(r)?);
        }
        let shift = Linearized { constant: self.shift_constant.value(r)?, coeffs };
        let lhs = rel.sub(&shift.wp(r)?, r);
        let rhs = Linearized::term(self.a_root.value(r)?, 0, self.b_root.value(r)?, r);
        Ok(lhs == rhs)
    }
}

/// One constraint `(m_i, d_i, e_i)` of [`choose_l`].
pub type LConstraint<E> = (u32, E, E);

/// Largest `l` scanned by [`choose_l`].
pub fn max_l(p: u8) -> u32 {
    (62.0 / (p as f64).log2()).floor() as u32
}

/// Smallest `l >= floor` with `phi^{p^{l-s}} b ≺ phi^{p^{l-s-m_i}} d_i + e_i`
/// for every constraint.
pub fn choose_l<R: PRing>(
    r: &R,
    phi: &FieldElem,
    b: &R::Elem,
    s: u32,
    constraints: &[LConstraint<R::Elem>],
    floor: u32,
) -> Result<u32> {
    let vphi = r.valuation(&r.base(phi.clone()));
    let vphi = match vphi {
        Valuation::Finite(v) if v < 0.into() => v,
        _ => return Err(Error::BadPhi),
    };
    let vb = r.valuation(b);
    let p = phi.p() as i64;
    let pow = |k: u32| p.checked_pow(k).ok_or(Error::ExponentOverflow);
    'scan: for l in floor.max(s)..=max_l(phi.p()) {
        let lhs = vb + Valuation::Finite(vphi * pow(l - s)?);
        for (m, d, e) in constraints {
            if l < s + m {
                continue 'scan;
            }
            let k = l - s - m;
            let rhs = if r.is_zero(d) {
                r.valuation(e)
            } else {
                let vd = r.valuation(d) + Valuation::Finite(vphi * pow(k)?);
                let ve = r.valuation(e);
                if vd != ve {
                    vd.min(ve)
                } else {
                    let scaled = r.mul(&r.base(phi.frobenius_power(k)?), d);
                    r.valuation(&r.add(&scaled, e))
                }
            };
            if lhs >= rhs {
                continue 'scan;
            }
        }
        return Ok(l);
    }
    Err(Error::PrecisionExceeded(max_l(phi.p()) as usize))
}

/// Output of [`reduce_special`]: `Y = X - g(Z)` satisfies
/// `Y^p - Y = h Z + eta`. `s` is the index of the lowest nonzero coefficient
/// of the input polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<E> {
    pub g: SpecialPoly<E>,
    pub h: Witness<E>,
    pub eta: Witness<E>,
    pub s: u32,
}

/// Reduces `X^p - X = T (f(Z)^p - f(Z) - alpha1) + alpha2`, `T = 1/t^{p^l}`,
/// to a relation linear in `Z`.
///
/// Writing `D_j = T (b_{j-1}^p - b_j)` for the coefficients of the right-hand
/// side, the terms `D_j Z^{p^j}` are removed from the top down by subtracting
/// `E_j^{1/p} Z^{p^{j-1}}` with `E_{n+1} = D_{n+1}` and
/// `E_{j-1} = D_{j-1} + E_j^{1/p}`, leaving `h = E_0`. The constant
/// `C = T (c^p - c - alpha1)` is pushed down to `C^{1/p^{s+1}}`.
pub fn reduce_special<R: PRing>(
    r: &R,
    f: &SpecialPoly<R::Elem>,
    alpha1: &Witness<R::Elem>,
    alpha2: &Witness<R::Elem>,
    t_inv: &FieldElem,
    l: u32,
    big_n: u32,
) -> Result<Reduction<R::Elem>> {
    let (m, n) = (f.m, f.n);
    if m <= n || l <= m || big_n <= m {
        return Err(Error::PreconditionViolation(format!(
            "need m > n, l > m, N > m; got m={m}, n={n}, l={l}, N={big_n}"
        )));
    }
    let tw = base_power(r, t_inv, l);
    let b = |j: i64| if j < 0 { Witness::zero(r) } else { f.coeff(j as u32, r) };
    let s = (0..=n)
        .find(|&j| !b(j as i64).is_zero(r))
        .ok_or_else(|| Error::PreconditionViolation("f has no Z terms".into()))?;
    let d: Vec<Witness<R::Elem>> =
        (0..=n + 1).map(|j| tw.mul(&b(j as i64 - 1).frob().sub(&b(j as i64), r)?, r)).collect::<Result<_>>()?;
    let mut e = d[(n + 1) as usize].clone();
    let mut g_coeffs = BTreeMap::new();
    for j in (1..=n + 1).rev() {
        let shift = e.root(r, 1)?;
        e = d[(j - 1) as usize].add(&shift, r)?;
        if !shift.is_zero(r) {
            g_coeffs.insert(j - 1, shift);
        }
    }
    let h = e;
    let c1 = tw.mul(&f.constant.frob().sub(&f.constant, r)?.sub(alpha1, r)?, r)?;
    let mut g_const = Witness::zero(r);
    for q in 1..=s + 1 {
        g_const = g_const.add(&c1.root(r, q)?, r)?;
    }
    let eta = c1.root(r, s + 1)?.add(alpha2, r)?;
    let g = SpecialPoly::new(r, m - n - 1, n, g_const, g_coeffs)?;
    Ok(Reduction { g, h, eta, s })
}

impl<E: Clone + PartialEq + std::fmt::Debug> Reduction<E> {
    /// Checks `R(Z) - (g^p - g)(Z) = h Z + eta` symbolically, where `R` is
    /// the right-hand side of the input relation.
    pub fn verify<R: PRing<Elem = E>>(
        &self,
        r: &R,
        f: &SpecialPoly<E>,
        alpha1: &Witness<E>,
        alpha2: &Witness<E>,
        t_inv: &FieldElem,
        l: u32,
    ) -> Result<bool> {
        let tv = base_power(r, t_inv, l).value(r)?;
        let fv = f.values(r)?;
        let inner = fv.wp(r)?.sub(&Linearized { constant: alpha1.value(r)?, coeffs: BTreeMap::new() }, r);
        let rel = inner.scale(&tv, r).add(&Linearized { constant: alpha2.value(r)?, coeffs: BTreeMap::new() }, r);
        let lhs = rel.sub(&self.g.values(r)?.wp(r)?, r);
        let rhs = Linearized::term(self.h.value(r)?, 0, self.eta.value(r)?, r);
        Ok(lhs == rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldCtx;
    use crate::expr::parse_field;

    fn k2() -> FieldCtx {
        FieldCtx::new(2, 1).unwrap()
    }

    fn w(k: &FieldCtx, s: &str, e: u32) -> Witness<FieldElem> {
        Witness { root: parse_field(*k, s).unwrap(), exp: e }
    }

    fn sample(k: &FieldCtx, m: u32, n: u32) -> SpecialPoly<FieldElem> {
        let mut coeffs = BTreeMap::new();
        for j in 0..=n {
            coeffs.insert(j, w(k, &format!("s1^{}/t^{}", j + 1, 2 * j + 1), m + j));
        }
        SpecialPoly::new(k, m, n, w(k, "s1 + t", m), coeffs).unwrap()
    }

    #[test]
    fn weaken_keeps_values() {
        let k = k2();
        let f = sample(&k, 3, 1);
        let g = f.weaken(&k, 2, 2).unwrap();
        assert_eq!((g.m, g.n), (2, 2));
        assert_eq!(g.values(&k).unwrap(), f.values(&k).unwrap());
        let same = f.weaken(&k, 3, 1).unwrap();
        assert!(same.coeffs.values().all(|w| w.exp == 3));
        assert_eq!(same.values(&k).unwrap(), f.values(&k).unwrap());
        let f21 = sample(&k, 2, 1);
        assert!(matches!(f21.weaken(&k, 3, 1), Err(Error::ClassViolation(_))));
    }

    #[test]
    fn compose_class_and_values() {
        let k = k2();
        let g = sample(&k, 2, 2);
        let f = sample(&k, 3, 1);
        let gf = g.compose(&f, &k).unwrap();
        assert_eq!((gf.m, gf.n), (2, 3));
        for z in ["s1", "1/t", "s1*t + 1", "t^3/(s1 + 1)", "s1^3"] {
            let z = parse_field(k, z).unwrap();
            let lhs = gf.eval(&z, &k).unwrap();
            let rhs = g.eval(&f.eval(&z, &k).unwrap(), &k).unwrap();
            assert_eq!(lhs, rhs);
        }
        let id = SpecialPoly::new(&k, 3, 0, Witness::zero(&k), BTreeMap::from([(0, Witness::one(&k))])).unwrap();
        assert_eq!(id.compose(&f, &k).unwrap().values(&k).unwrap(), f.values(&k).unwrap());
    }

    #[test]
    fn choose_l_examples() {
        let k = k2();
        let phi = parse_field(k, "1/t").unwrap();
        let one = k.one();
        assert_eq!(choose_l(&k, &phi, &one, 0, &[(1, one.clone(), k.t())], 1).unwrap(), 1);
        let e = parse_field(k, "1/t^4").unwrap();
        assert_eq!(choose_l(&k, &phi, &one, 0, &[(1, k.zero(), e)], 1).unwrap(), 3);
        assert_eq!(choose_l(&k, &phi, &one, 0, &[], 5).unwrap(), 5);
        assert_eq!(choose_l(&k, &k.t(), &one, 0, &[], 5), Err(Error::BadPhi));
    }

    #[test]
    fn root_shift_identities() {
        let k = k2();
        let cases = [(w(&k, "s1/t", 2), w(&k, "s1 + 1/t^3", 3), 0u32, 1u32), (w(&k, "s1", 3), w(&k, "t", 1), 1, 1)];
        for (a, b, j, m) in cases {
            let rs = root_shift(&k, &a, &b, j, m).unwrap();
            assert!(rs.verify(&k, &a, &b, j).unwrap());
        }
        // j = 0, m = 1: W = X - b^{1/p}
        let b = w(&k, "s1", 1);
        let rs = root_shift(&k, &w(&k, "t", 0), &b, 0, 1).unwrap();
        assert!(rs.shift_coeffs.is_empty());
        assert_eq!(rs.shift_constant.value(&k).unwrap(), k.s(1));
        // a = 0: only the constant moves
        let rs = root_shift(&k, &Witness::zero(&k), &w(&k, "s1", 2), 2, 2).unwrap();
        assert!(rs.shift_coeffs.is_empty() && rs.a_root.is_zero(&k));
        assert!(rs.verify(&k, &Witness::zero(&k), &w(&k, "s1", 2), 2).unwrap());
        // p = 2, j = 1, a = u^2: shift contains u Z
        let rs = root_shift(&k, &w(&k, "s1/t", 1), &Witness::zero(&k), 1, 1).unwrap();
        assert_eq!(rs.shift_coeffs[&0].value(&k).unwrap(), parse_field(k, "s1/t").unwrap());
    }

    #[test]
    fn reduction_identity_and_classes() {
        let k = k2();
        let t_inv = parse_field(k, "1/t").unwrap();
        let f = SpecialPoly::new(&k, 4, 0, Witness::zero(&k), BTreeMap::from([(0, w(&k, "s1/t", 4))])).unwrap();
        let a1 = w(&k, "1/t", 5);
        let a2 = w(&k, "s1/t^3", 5);
        let red = reduce_special(&k, &f, &a1, &a2, &t_inv, 6, 5).unwrap();
        assert!(red.verify(&k, &f, &a1, &a2, &t_inv, 6).unwrap());
        assert_eq!((red.g.m, red.g.n), (3, 0));
        let f = sample(&k, 4, 2);
        let red = reduce_special(&k, &f, &a1, &a2, &t_inv, 6, 5).unwrap();
        assert!(red.verify(&k, &f, &a1, &a2, &t_inv, 6).unwrap());
        assert_eq!((red.g.m, red.g.n), (1, 2));
        assert!(red.h.exp >= 2 && red.eta.exp >= 1);
        assert!(matches!(reduce_special(&k, &f, &a1, &a2, &t_inv, 4, 5), Err(Error::PreconditionViolation(_))));
    }
}
