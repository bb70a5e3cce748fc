//! Single-field certificate mutations, each paired with the check that
//! must reject it.

use super::{Check, WeaveCertificate};
use crate::error::{Error, Result};
use crate::gene::{sigma_sum, GeneWord, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// `gamma2` at level 1 replaced by `1/t`.
    Gamma2Pole,
    /// `z_2 := z_2 + z_1`.
    ShiftZ2,
    /// First `W` of the word replaced by `F:s1`.
    WildToFerocious,
    /// `beta` at level 2 (the trace-one element of `L_1`) doubled plus one.
    PerturbBeta,
    /// `rhs_1 := rhs_1 + 1`.
    ShiftRhs1,
    /// `N := Σ(n)`.
    SmallN,
}

impl Fault {
    pub const ALL: [Fault; 6] = [
        Fault::Gamma2Pole,
        Fault::ShiftZ2,
        Fault::WildToFerocious,
        Fault::PerturbBeta,
        Fault::ShiftRhs1,
        Fault::SmallN,
    ];

    /// The check expected to fail.
    pub fn expected(self) -> Check {
        match self {
            Fault::Gamma2Pole => Check::GammaInMaxIdeal,
            Fault::ShiftZ2 => Check::ZRelation,
            Fault::WildToFerocious => Check::FerociousResidue,
            Fault::PerturbBeta => Check::Albert,
            Fault::ShiftRhs1 => Check::XRelation,
            Fault::SmallN => Check::Parameters,
        }
    }

    /// Level at which the expected failure is reported.
    pub fn level(self, cert: &WeaveCertificate) -> Option<usize> {
        match self {
            Fault::Gamma2Pole | Fault::ShiftRhs1 => Some(1),
            Fault::ShiftZ2 | Fault::PerturbBeta => Some(2),
            Fault::WildToFerocious => cert.word.letters().iter().position(|l| *l == Letter::W).map(|k| k + 1),
            Fault::SmallN => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Fault::Gamma2Pole => "gamma2[1] := 1/t",
            Fault::ShiftZ2 => "z2 := z2 + z1",
            Fault::WildToFerocious => "word: W -> F:s1",
            Fault::PerturbBeta => "beta[2] perturbed",
            Fault::ShiftRhs1 => "rhs[1] += 1",
            Fault::SmallN => "N := Σ(n)",
        }
    }

    pub fn apply(self, cert: &WeaveCertificate) -> Result<WeaveCertificate> {
        let mut c = cert.clone();
        let ctx = c.ctx()?;
        let need = |k: usize| {
            if c.levels.len() < k {
                Err(Error::PreconditionViolation(format!("fault needs {k} levels")))
            } else {
                Ok(())
            }
        };
        match self {
            Fault::Gamma2Pole => {
                need(1)?;
                c.levels[0].gamma2 = crate::tower::TowerElem::from_base(ctx.t_pow(-1), &ctx, 0);
            }
            Fault::ShiftZ2 => {
                need(2)?;
                let z1 = c.levels[0].z.lift(2);
                c.levels[1].z = c.levels[1].z.add(&z1);
            }
            Fault::WildToFerocious => {
                let mut letters = c.word.letters().to_vec();
                let k = letters
                    .iter()
                    .position(|l| *l == Letter::W)
                    .ok_or_else(|| Error::PreconditionViolation("word has no W".into()))?;
                letters[k] = Letter::F(1);
                c.word = GeneWord::new(letters)?;
            }
            Fault::PerturbBeta => {
                need(2)?;
                let b = &c.levels[1].albert.beta;
                c.levels[1].albert.beta = b.add(b).add(&crate::tower::TowerElem::from_base(ctx.one(), &ctx, 1));
            }
            Fault::ShiftRhs1 => {
                need(1)?;
                c.levels[0].rhs = c.levels[0].rhs.add(&crate::tower::TowerElem::from_base(ctx.one(), &ctx, 0));
            }
            Fault::SmallN => c.big_n = sigma_sum(c.word.len()) as u32,
        }
        Ok(c)
    }
}
