use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LevelCert, Reduction, VerificationReport, WeaveCertificate};
use crate::algebra::{FieldCtx, FieldElem};
use crate::error::{Error, Result};
use crate::expr::{fmt_tower_monomial, parse_field, parse_tower_monomial};
use crate::gene::GeneWord;
use crate::special_poly::{SpecialPoly, Witness, PRIME_FIELD};
use crate::tower::{AlbertData, TowerElem};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Term {
    mono: String,
    coeff: String,
}

type Elem = Vec<Term>;

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    root: Elem,
    /// `null` for prime-field constants.
    exp: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    j: u32,
    #[serde(flatten)]
    w: WitnessJson,
}

#[derive(Serialize, Deserialize)]
struct SpecialJson {
    m: u32,
    n: u32,
    constant: WitnessJson,
    coeffs: Vec<CoeffJson>,
}

#[derive(Serialize, Deserialize)]
struct AlbertJson {
    beta: Elem,
    alpha: Elem,
}

#[derive(Serialize, Deserialize)]
struct LevelJson {
    i: usize,
    #[serde(rename = "type")]
    kind: String,
    l: u32,
    u: Elem,
    rhs: Elem,
    albert: AlbertJson,
    x_from_z: SpecialJson,
    z: Elem,
    gamma1: Elem,
    gamma2: Elem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    version: u32,
    p: u8,
    r: usize,
    word: String,
    #[serde(rename = "N")]
    big_n: u32,
    levels: Vec<LevelJson>,
    /// Regenerable from the rest; ignored when loading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verification: Option<serde_json::Value>,
}

fn names(ctx: &FieldCtx) -> Vec<String> {
    ctx.var_names()
}

fn enc_elem(u: &TowerElem, names: &[String]) -> Elem {
    u.terms().map(|(e, c)| Term { mono: fmt_tower_monomial(&e), coeff: c.fmt_with(names) }).collect()
}

fn enc_witness(w: &Witness<TowerElem>, names: &[String]) -> WitnessJson {
    WitnessJson { root: enc_elem(&w.root, names), exp: (w.exp != PRIME_FIELD).then_some(w.exp) }
}

fn enc_special(f: &SpecialPoly<TowerElem>, names: &[String]) -> SpecialJson {
    SpecialJson {
        m: f.m,
        n: f.n,
        constant: enc_witness(&f.constant, names),
        coeffs: f.coeffs.iter().map(|(j, w)| CoeffJson { j: *j, w: enc_witness(w, names) }).collect(),
    }
}

pub(super) fn to_json(cert: &WeaveCertificate, report: Option<&VerificationReport>) -> Result<String> {
    let ctx = cert.ctx()?;
    let nm = names(&ctx);
    let levels = cert
        .levels
        .iter()
        .enumerate()
        .map(|(k, lv)| LevelJson {
            i: k + 1,
            kind: cert.word.letters().get(k).map(|l| l.to_string()).unwrap_or_default(),
            l: lv.l,
            u: enc_elem(&lv.u, &nm),
            rhs: enc_elem(&lv.rhs, &nm),
            albert: AlbertJson { beta: enc_elem(&lv.albert.beta, &nm), alpha: enc_elem(&lv.albert.alpha, &nm) },
            x_from_z: enc_special(&lv.x_from_z, &nm),
            z: enc_elem(&lv.z, &nm),
            gamma1: enc_elem(&lv.gamma1, &nm),
            gamma2: enc_elem(&lv.gamma2, &nm),
            h: lv.reduction.as_ref().map(|r| enc_witness(&r.h, &nm)),
            eta: lv.reduction.as_ref().map(|r| enc_witness(&r.eta, &nm)),
            s: lv.reduction.as_ref().map(|r| r.s),
        })
        .collect();
    let verification = report.map(serde_json::to_value).transpose().map_err(|e| Error::Malformed(e.to_string()))?;
    let doc = CertJson {
        version: VERSION,
        p: cert.p,
        r: cert.r,
        word: cert.word.to_string(),
        big_n: cert.big_n,
        levels,
        verification,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Malformed(e.to_string()))
}

fn dec_elem(ctx: &FieldCtx, e: &Elem, level: usize) -> Result<TowerElem> {
    let mut u = TowerElem::zero(ctx, level);
    for t in e {
        let exps = parse_tower_monomial(&t.mono, level, ctx.p)?;
        let c: FieldElem = parse_field(*ctx, &t.coeff)?;
        u = u.add(&TowerElem::monomial(ctx, &exps, c).lift(level));
    }
    Ok(u)
}

fn dec_witness(ctx: &FieldCtx, w: &WitnessJson, level: usize) -> Result<Witness<TowerElem>> {
    Ok(Witness { root: dec_elem(ctx, &w.root, level)?, exp: w.exp.unwrap_or(PRIME_FIELD) })
}

fn dec_special(ctx: &FieldCtx, f: &SpecialJson, level: usize) -> Result<SpecialPoly<TowerElem>> {
    let mut coeffs = BTreeMap::new();
    for c in &f.coeffs {
        if coeffs.insert(c.j, dec_witness(ctx, &c.w, level)?).is_some() {
            return Err(Error::Malformed(format!("duplicate coefficient {}", c.j)));
        }
    }
    Ok(SpecialPoly { m: f.m, n: f.n, constant: dec_witness(ctx, &f.constant, level)?, coeffs })
}

pub(super) fn from_json(src: &str) -> Result<WeaveCertificate> {
    let doc: CertJson = serde_json::from_str(src).map_err(|e| Error::Malformed(e.to_string()))?;
    if doc.version != VERSION {
        return Err(Error::Malformed(format!("unsupported version {}", doc.version)));
    }
    let ctx = FieldCtx::new(doc.p as u64, doc.r)?;
    let word = GeneWord::parse(&doc.word)?;
    let mut levels = Vec::new();
    for (k, lv) in doc.levels.iter().enumerate() {
        let i = k + 1;
        if lv.i != i {
            return Err(Error::Malformed(format!("level {} listed at position {i}", lv.i)));
        }
        if word.letters().get(k).map(|l| l.to_string()).as_deref() != Some(lv.kind.as_str()) {
            return Err(Error::Malformed(format!("level {i} has type {} but the word says otherwise", lv.kind)));
        }
        let below = i - 1;
        let reduction = match (&lv.h, &lv.eta, lv.s) {
            (Some(h), Some(eta), Some(s)) => {
                Some(Reduction { h: dec_witness(&ctx, h, below)?, eta: dec_witness(&ctx, eta, below)?, s })
            }
            (None, None, None) => None,
            _ => return Err(Error::Malformed(format!("partial reduction data at level {i}"))),
        };
        levels.push(LevelCert {
            l: lv.l,
            u: dec_elem(&ctx, &lv.u, below)?,
            rhs: dec_elem(&ctx, &lv.rhs, below)?,
            albert: AlbertData {
                beta: dec_elem(&ctx, &lv.albert.beta, below)?,
                alpha: dec_elem(&ctx, &lv.albert.alpha, below)?,
            },
            x_from_z: dec_special(&ctx, &lv.x_from_z, below)?,
            z: dec_elem(&ctx, &lv.z, i)?,
            gamma1: dec_elem(&ctx, &lv.gamma1, below)?,
            gamma2: dec_elem(&ctx, &lv.gamma2, below)?,
            reduction,
        });
    }
    Ok(WeaveCertificate { p: doc.p, r: doc.r, word, big_n: doc.big_n, levels })
}
