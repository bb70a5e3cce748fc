use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{initial_z, residue_exponents, WeaveCertificate};
use crate::algebra::{FieldCtx, FieldElem};
use crate::error::Result;
use crate::gene::{sigma_sum, Antecedent, GeneWord, Letter};
use crate::tower::oracle::in_residue_subfield;
use crate::tower::{LevelRing, Tower, ValuationOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// (a) `z_i^p - gamma1 z_i = z_{a(i)} + gamma2` exactly.
    ZRelation,
    /// (b) `v(gamma1), v(gamma2) > 0`.
    GammaInMaxIdeal,
    /// (c) `v(z_i)` has exact denominator `p^{w(i)}`.
    WildValuation,
    /// (d) `v(z_i) = 0` and the residue of `z_i` is `a^{1/p^{f_a(i)}}`.
    FerociousResidue,
    /// (e) value group and residue field indices.
    Indices,
    /// (f) `sigma` respects the relations and has order `p^n`.
    Sigma,
    /// `Tr(beta) = 1` and `sigma(alpha) - alpha = beta^p - beta`.
    Albert,
    /// `rhs_i = u_i + alpha_{i-1}^{p^N}` with `u_i = t^{-p^{l_i}} u_{a(i)}`.
    XRelation,
    /// `x_i` is the recorded special polynomial of `z_i`.
    XFromZ,
    /// `N > Σ(n)`, bounds on `l_i`, shape of the certificate.
    Parameters,
}

impl Check {
    pub fn label(self) -> &'static str {
        match self {
            Check::ZRelation => "(a) z-relation",
            Check::GammaInMaxIdeal => "(b) gamma in maximal ideal",
            Check::WildValuation => "(c) wild valuation",
            Check::FerociousResidue => "(d) ferocious residue",
            Check::Indices => "(e) group and residue indices",
            Check::Sigma => "(f) sigma",
            Check::Albert => "Albert data",
            Check::XRelation => "x-relation",
            Check::XFromZ => "x from z",
            Check::Parameters => "parameters",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// `None` for checks on the whole tower.
    pub level: Option<usize>,
    pub check: Check,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(i) => write!(f, "level {i}: {}: {}", self.check, self.detail),
            None => write!(f, "{}: {}", self.check, self.detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub i: usize,
    pub step: String,
    pub v_z: Option<String>,
    pub residue_z: Option<String>,
    /// `[Γ_{L_i} : Γ_K]`.
    pub value_group_index: Option<u64>,
    /// `[l_i : k]`.
    pub residue_degree: Option<u64>,
    pub checks: BTreeMap<Check, bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub levels: Vec<LevelReport>,
    pub sigma_well_defined: bool,
    pub sigma_order: Option<u64>,
    pub parameters: bool,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failed(&self, level: Option<usize>, check: Check) -> bool {
        self.failures.iter().any(|f| f.level == level && f.check == check)
    }

    pub fn failed_anywhere(&self, check: Check) -> bool {
        self.failures.iter().any(|f| f.check == check)
    }
}

struct Ctx {
    failures: Vec<Failure>,
}

impl Ctx {
    fn record(&mut self, level: Option<usize>, check: Check, ok: bool, detail: impl FnOnce() -> String) -> bool {
        if !ok {
            self.failures.push(Failure { level, check, detail: detail() });
        }
        ok
    }
}

fn shape_errors(cert: &WeaveCertificate) -> Vec<String> {
    let mut out = Vec::new();
    let n = cert.word.len();
    if let Err(e) = cert.ctx() {
        out.push(e.to_string());
        return out;
    }
    if let Err(e) = cert.word.validate(cert.p, cert.r) {
        out.push(e.to_string());
    }
    if n == 0 || cert.levels.len() != n {
        out.push(format!("{} levels for a word of length {n}", cert.levels.len()));
        return out;
    }
    for (k, lv) in cert.levels.iter().enumerate() {
        let i = k + 1;
        let low = [&lv.u, &lv.rhs, &lv.albert.beta, &lv.albert.alpha, &lv.gamma1, &lv.gamma2];
        if low.iter().any(|e| e.level() != i - 1) || lv.z.level() != i {
            out.push(format!("elements at level {i} have the wrong height"));
        }
        let roots = std::iter::once(&lv.x_from_z.constant).chain(lv.x_from_z.coeffs.values());
        if roots.into_iter().any(|w| w.root.level() != i - 1) {
            out.push(format!("x_from_z coefficients at level {i} have the wrong height"));
        }
    }
    out
}

fn parameter_errors(cert: &WeaveCertificate) -> Vec<String> {
    let mut out = Vec::new();
    let n = cert.word.len();
    let sig = sigma_sum(n) as u32;
    if cert.big_n <= sig {
        out.push(format!("N = {} does not exceed Σ({n}) = {sig}", cert.big_n));
    }
    for (k, lv) in cert.levels.iter().enumerate() {
        let floor = if k == 0 { cert.big_n } else { cert.big_n + 1 };
        if lv.l < floor {
            out.push(format!("l_{} = {} is below {floor}", k + 1, lv.l));
        }
    }
    out
}

/// `[Γ : Γ_K]` and the σ-shifts `e_j` of the residue field `k(σ_j^{p^{e_j}})`.
struct Indices {
    group_den: i64,
    shifts: Vec<u32>,
}

fn pval(mut x: i64, p: i64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut k = 0;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

/// Minimal p-adic valuation of the `σ_j`-exponents of a monomial residue,
/// or `None` when the residue is not a monomial.
fn monomial_shift(x: &FieldElem, j: usize, p: i64) -> Option<u32> {
    let x = x.reduced();
    if x.num().terms().count() != 1 || x.den().terms().count() != 1 {
        return None;
    }
    let e = x.num().terms().next().unwrap().0[j] - x.den().terms().next().unwrap().0[j];
    Some(pval(e, p))
}

/// Checks a weave certificate from scratch.
pub fn verify_weave(cert: &WeaveCertificate) -> VerificationReport {
    let mut cx = Ctx { failures: Vec::new() };
    let shape = shape_errors(cert);
    if !shape.is_empty() {
        for s in shape {
            cx.record(None, Check::Parameters, false, || s);
        }
        return VerificationReport {
            levels: Vec::new(),
            sigma_well_defined: false,
            sigma_order: None,
            parameters: false,
            failures: cx.failures,
            pass: false,
        };
    }
    let mut parameters = true;
    for s in parameter_errors(cert) {
        parameters = cx.record(None, Check::Parameters, false, || s);
    }
    let ctx = cert.ctx().expect("checked");
    let p = ctx.p as i64;
    let word = &cert.word;
    let n = word.len();
    let rexp = residue_exponents(word, cert.r);
    let mut tower = Tower::new(ctx);
    let mut oracle = Some(ValuationOracle::new(ctx, rexp.clone()));
    let mut idx = Indices { group_den: 1, shifts: rexp.clone() };
    let mut levels = Vec::new();

    for i in 1..=n {
        let lv = &cert.levels[i - 1];
        let letter = word.letter(i).expect("checked");
        let mut checks = BTreeMap::new();
        let mut report = LevelReport {
            i,
            step: letter.to_string(),
            v_z: None,
            residue_z: None,
            value_group_index: None,
            residue_degree: None,
            checks: BTreeMap::new(),
        };

        let albert_ok = tower.check_albert(&lv.albert, i - 1).unwrap_or(false);
        checks.insert(Check::Albert, cx.record(Some(i), Check::Albert, albert_ok, || "Albert identities fail".into()));

        let xr = x_relation(cert, &tower, i).unwrap_or_else(|e| Err(e.to_string()));
        checks.insert(Check::XRelation, cx.record(Some(i), Check::XRelation, xr.is_ok(), || xr.clone().unwrap_err()));

        let delta = if i == 1 { Ok(tower.one(0)) } else { tower.frobenius_power(&lv.albert.beta, cert.big_n) };
        let pushed = delta.and_then(|d| tower.push_level(lv.rhs.clone(), d));
        if let Err(e) = pushed {
            cx.record(Some(i), Check::Parameters, false, || format!("cannot adjoin level: {e}"));
            break;
        }

        let zrel = z_relation(cert, &tower, i);
        checks
            .insert(Check::ZRelation, cx.record(Some(i), Check::ZRelation, zrel.is_ok(), || zrel.clone().unwrap_err()));

        let xz = x_from_z_ok(cert, &tower, i);
        checks.insert(Check::XFromZ, cx.record(Some(i), Check::XFromZ, xz.is_ok(), || xz.clone().unwrap_err()));

        // (b) needs the oracle up to level i-1
        let gamma_ok = match &oracle {
            Some(o) => {
                let v1 = o.valuation(&tower, &lv.gamma1);
                let v2 = o.valuation(&tower, &lv.gamma2);
                let ok = v1.is_positive() && v2.is_positive();
                cx.record(Some(i), Check::GammaInMaxIdeal, ok, || format!("v(gamma1) = {v1}, v(gamma2) = {v2}"))
            }
            None => cx.record(Some(i), Check::GammaInMaxIdeal, false, || "no valuation below this level".into()),
        };
        checks.insert(Check::GammaInMaxIdeal, gamma_ok);

        let step_check = match letter {
            Letter::W => Check::WildValuation,
            Letter::F(_) => Check::FerociousResidue,
        };
        let pushed = oracle.as_mut().map(|o| o.push_level(&tower, &lv.z, &lv.gamma1, letter));
        match pushed {
            Some(Ok(())) => {
                let o = oracle.as_ref().unwrap();
                let nu = o.nu(i);
                report.v_z = Some(nu.to_string());
                let step = step_data(o, &ctx, word, &rexp, i, nu);
                if let Some(zbar) = o.zbar(i) {
                    report.residue_z = Some(zbar.reduced().to_string());
                }
                checks.insert(step_check, cx.record(Some(i), step_check, step.is_ok(), || step.clone().unwrap_err()));
                let ind = update_indices(&mut idx, o, &ctx, word, &rexp, i, nu);
                report.value_group_index = Some(idx.group_den as u64);
                let deg: u32 = rexp.iter().zip(&idx.shifts).map(|(r, s)| r.saturating_sub(*s)).sum();
                report.residue_degree = Some((p as u64).pow(deg));
                checks.insert(
                    Check::Indices,
                    cx.record(Some(i), Check::Indices, ind.is_ok(), || ind.clone().unwrap_err()),
                );
            }
            Some(Err(e)) => {
                checks.insert(
                    step_check,
                    cx.record(Some(i), step_check, false, || format!("valuation data rejected: {e}")),
                );
                checks.insert(Check::Indices, cx.record(Some(i), Check::Indices, false, || "no valuation data".into()));
                oracle = None;
            }
            None => {
                checks.insert(
                    step_check,
                    cx.record(Some(i), step_check, false, || "no valuation below this level".into()),
                );
                checks.insert(Check::Indices, cx.record(Some(i), Check::Indices, false, || "no valuation data".into()));
            }
        }
        report.checks = checks;
        levels.push(report);
    }

    let complete = tower.height() == n;
    let sigma_well_defined = complete && tower.sigma_well_defined(n).unwrap_or(false);
    let sigma_order = if complete { tower.sigma_order(n) } else { None };
    let want = (p as u64).pow(n as u32);
    cx.record(None, Check::Sigma, sigma_well_defined && sigma_order == Some(want), || {
        format!("well defined: {sigma_well_defined}, order {sigma_order:?}, expected {want}")
    });
    let pass = cx.failures.is_empty();
    VerificationReport { levels, sigma_well_defined, sigma_order, parameters, failures: cx.failures, pass }
}

fn x_relation(cert: &WeaveCertificate, tower: &Tower, i: usize) -> Result<std::result::Result<(), String>> {
    let ctx = tower.ctx();
    let lv = &cert.levels[i - 1];
    let ua = match cert.word.antecedent(i)? {
        Antecedent::First(g) => tower.base(initial_z(ctx, g), i - 1),
        Antecedent::Index(a) => cert.levels[a - 1].u.lift(i - 1),
    };
    let e = (ctx.p as i64).checked_pow(lv.l).ok_or(crate::Error::ExponentOverflow)?;
    let u = ua.scale(&ctx.t_pow(-e));
    if u != lv.u {
        return Ok(Err("u_i differs from t^{-p^l} u_{a(i)}".into()));
    }
    let alpha_pn = tower.frobenius_power(&lv.albert.alpha, cert.big_n)?;
    if lv.rhs != lv.u.add(&alpha_pn) {
        return Ok(Err("rhs differs from u_i + alpha^{p^N}".into()));
    }
    Ok(Ok(()))
}

fn z_relation(cert: &WeaveCertificate, tower: &Tower, i: usize) -> std::result::Result<(), String> {
    let lv = &cert.levels[i - 1];
    let za = match cert.word.antecedent(i).map_err(|e| e.to_string())? {
        Antecedent::First(g) => tower.base(initial_z(tower.ctx(), g), i),
        Antecedent::Index(a) => cert.levels[a - 1].z.lift(i),
    };
    let lhs = tower.frobenius(&lv.z).map_err(|e| e.to_string())?.sub(&tower.mul(&lv.gamma1.lift(i), &lv.z));
    if lhs == za.add(&lv.gamma2.lift(i)) {
        Ok(())
    } else {
        Err("z_i^p - gamma1 z_i differs from z_{a(i)} + gamma2".into())
    }
}

fn x_from_z_ok(cert: &WeaveCertificate, tower: &Tower, i: usize) -> std::result::Result<(), String> {
    let lv = &cert.levels[i - 1];
    let f = &lv.x_from_z;
    let m = cert.big_n.saturating_sub(sigma_sum(i) as u32);
    if f.m < m || f.n > i as u32 {
        return Err(format!("class {{{}, {}}} is not inside {{{m}, {i}}}", f.m, f.n));
    }
    let ring = LevelRing { tower, oracle: None, level: i };
    let lifted = f.map(|e| e.lift(i));
    let valid = crate::special_poly::SpecialPoly::new(
        &ring,
        lifted.m,
        lifted.n,
        lifted.constant.clone(),
        lifted.coeffs.clone(),
    );
    let f = valid.map_err(|e| e.to_string())?;
    let x = f.eval(&lv.z, &ring).map_err(|e| e.to_string())?;
    if x == tower.x(i, i) {
        Ok(())
    } else {
        Err("x_from_z(z_i) differs from x_i".into())
    }
}

/// `σ_a^{p^{R_a - f_a(i)}}`, the expected residue of an `F_a` generator.
fn expected_zbar(ctx: &FieldCtx, word: &GeneWord, rexp: &[u32], a: usize, i: usize) -> FieldElem {
    let f = word.count_f(a, i).unwrap() as u32;
    let mut exps = vec![0i64; ctx.nvars()];
    exps[a - 1] = (ctx.p as i64).pow(rexp[a - 1] - f);
    ctx.monomial(&exps, 1)
}

fn step_data(
    o: &ValuationOracle,
    ctx: &FieldCtx,
    word: &GeneWord,
    rexp: &[u32],
    i: usize,
    nu: Rational64,
) -> std::result::Result<(), String> {
    let p = ctx.p as i64;
    match word.letter(i).unwrap() {
        Letter::W => {
            let w = word.count_w(i).unwrap() as u32;
            if *nu.denom() == p.pow(w) {
                Ok(())
            } else {
                Err(format!("v(z_{i}) = {nu}, expected exact denominator {}", p.pow(w)))
            }
        }
        Letter::F(a) => {
            let want = expected_zbar(ctx, word, rexp, a, i);
            match o.zbar(i) {
                Some(z) if nu == Rational64::from_integer(0) && *z == want => Ok(()),
                Some(z) => Err(format!("v(z_{i}) = {nu}, residue {}, expected {}", z.reduced(), want)),
                None => Err("no residue recorded".into()),
            }
        }
    }
}

/// Updates `Γ_{L_i}` and `l_i` from the new generator and compares with
/// `(1/p^{w(i)}) Z` and `k(a^{1/p^{f_a(i)}})`.
fn update_indices(
    idx: &mut Indices,
    o: &ValuationOracle,
    ctx: &FieldCtx,
    word: &GeneWord,
    rexp: &[u32],
    i: usize,
    nu: Rational64,
) -> std::result::Result<(), String> {
    let p = ctx.p as i64;
    idx.group_den = idx.group_den.lcm(nu.denom());
    if let Some(zbar) = o.zbar(i) {
        for j in 0..rexp.len() {
            match monomial_shift(zbar, j, p) {
                Some(e) => idx.shifts[j] = idx.shifts[j].min(e),
                None => return Err(format!("residue of z_{i} is not a monomial")),
            }
        }
    }
    let w = word.count_w(i).unwrap() as u32;
    if idx.group_den != p.pow(w) {
        return Err(format!("Γ index {} but {} wild steps", idx.group_den, w));
    }
    let mut fer = 0;
    for (j, &rj) in rexp.iter().enumerate() {
        let f = word.count_f(j + 1, i).unwrap() as u32;
        fer += f;
        if idx.shifts[j] != rj - f {
            return Err(format!(
                "residue field contains s{}^(1/p^{}) instead of exactly 1/p^{f}",
                j + 1,
                rj - idx.shifts[j]
            ));
        }
        if f < rj {
            let mut exps = vec![0i64; ctx.nvars()];
            exps[j] = p.pow(rj - f - 1);
            if in_residue_subfield(&ctx.monomial(&exps, 1), &idx.shifts) {
                return Err(format!("s{}^(1/p^{}) lies in the residue field", j + 1, f + 1));
            }
        }
    }
    let deg = idx.group_den * p.pow(fer);
    if deg != p.pow(i as u32) {
        return Err(format!("e f = {deg} differs from p^{i}"));
    }
    Ok(())
}
