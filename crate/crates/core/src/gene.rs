//! Gene words over `{W} ∪ {F_a}` and their counting functions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A letter: a wild step, or a ferocious step of type `s_j` (1-based `j`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    W,
    F(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::W => f.write_str("W"),
            Letter::F(j) => write!(f, "F:s{j}"),
        }
    }
}

impl Letter {
    pub fn parse(tok: &str) -> Result<Self> {
        let tok = tok.trim();
        if tok == "W" {
            return Ok(Letter::W);
        }
        let idx = tok
            .strip_prefix("F:s")
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&j| j >= 1)
            .ok_or_else(|| Error::InvalidGene(format!("bad letter '{tok}'")))?;
        Ok(Letter::F(idx))
    }
}

/// Result of the antecedent map: an earlier position, or the letter itself
/// at its first occurrence.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Antecedent {
    Index(usize),
    First(Letter),
}

/// Target residue extension: `s_j ↦ r_j` for `l = ⊗ k[x]/(x^{p^{r_j}} - s_j)`.
pub type TargetResidue = BTreeMap<usize, u32>;

/// A nonempty gene word. Positions are 1-based throughout.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GeneWord {
    letters: Vec<Letter>,
}

impl GeneWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidGene("empty word".into()));
        }
        Ok(GeneWord { letters })
    }

    /// Parses the comma-separated form, e.g. `F:s1,W,F:s1`.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s.split(',').filter(|t| !t.trim().is_empty()).map(Letter::parse).collect::<Result<Vec<_>>>()?;
        GeneWord::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    fn check(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.len() });
        }
        Ok(())
    }

    pub fn letter(&self, i: usize) -> Result<Letter> {
        self.check(i)?;
        Ok(self.letters[i - 1])
    }

    pub fn antecedent(&self, i: usize) -> Result<Antecedent> {
        let g = self.letter(i)?;
        Ok(match (1..i).rev().find(|&j| self.letters[j - 1] == g) {
            Some(j) => Antecedent::Index(j),
            None => Antecedent::First(g),
        })
    }

    /// Number of positions `j <= i` carrying `F_{s_a}`.
    pub fn count_f(&self, a: usize, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.letters[..i].iter().filter(|&&l| l == Letter::F(a)).count())
    }

    /// Number of positions `j <= i` carrying `W`.
    pub fn count_w(&self, i: usize) -> Result<usize> {
        self.check(i)?;
        Ok(self.letters[..i].iter().filter(|&&l| l == Letter::W).count())
    }

    /// Distinct ferocious indices in order of first appearance.
    pub fn alphabet(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for l in &self.letters {
            if let Letter::F(j) = l {
                if !out.contains(j) {
                    out.push(*j);
                }
            }
        }
        out
    }

    /// Checks that every letter refers to an available variable and that
    /// the alphabet is p-independent.
    pub fn validate(&self, p: u8, r: usize) -> Result<()> {
        let alpha = self.alphabet();
        if let Some(j) = alpha.iter().find(|&&j| j > r) {
            return Err(Error::InvalidGene(format!("letter F:s{j} but r = {r}")));
        }
        let rows: Vec<Vec<i64>> = alpha.iter().map(|&j| (1..=r).map(|k| i64::from(k == j)).collect()).collect();
        if exponent_rank_mod_p(&rows, p) < rows.len() {
            return Err(Error::InvalidGene("alphabet is not p-independent".into()));
        }
        Ok(())
    }

    pub fn is_admissible(&self, target: &TargetResidue) -> bool {
        let n = self.len();
        let alpha = self.alphabet();
        if target.len() != alpha.len() {
            return false;
        }
        alpha.iter().all(|&a| target.get(&a).is_some_and(|&r| r as usize == self.count_f(a, n).unwrap()))
    }

    /// The word with ferocious subscripts forgotten, e.g. `FW`.
    pub fn genome(&self) -> String {
        self.letters.iter().map(|l| if *l == Letter::W { 'W' } else { 'F' }).collect()
    }

    pub fn truncate(&self, i: usize) -> Result<GeneWord> {
        self.check(i)?;
        Ok(GeneWord { letters: self.letters[..i].to_vec() })
    }

    /// `s_a ↦ f_a(n)`.
    pub fn residue_target(&self) -> TargetResidue {
        let n = self.len();
        self.alphabet().into_iter().map(|a| (a, self.count_f(a, n).unwrap() as u32)).collect()
    }
}

impl fmt::Display for GeneWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&toks.join(","))
    }
}

/// `Σ(m) = 1 + 2 + ... + m`.
pub fn sigma_sum(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Parses `s1:2,s2:1`.
pub fn parse_target(s: &str) -> Result<TargetResidue> {
    let mut out = TargetResidue::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Error::InvalidGene(format!("bad target entry '{tok}'"));
        let (var, r) = tok.split_once(':').ok_or_else(bad)?;
        let j: usize = var.trim().strip_prefix('s').and_then(|d| d.parse().ok()).ok_or_else(bad)?;
        let r: u32 = r.trim().parse().map_err(|_| bad())?;
        if r == 0 || out.insert(j, r).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Rank over `F_p` of an integer exponent matrix. Monomials whose exponent
/// vectors are independent mod p are p-independent over `k^p`.
fn exponent_rank_mod_p(rows: &[Vec<i64>], p: u8) -> usize {
    let p = p as i64;
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|e| e.rem_euclid(p)).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|&b| (m[rank][col] * b) % p == 1).unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col] * inv % p;
                for c in 0..ncols {
                    m[r][c] = (m[r][c] - f * m[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GeneWord {
        GeneWord::parse(s).unwrap()
    }

    #[test]
    fn antecedents() {
        let w = g("F:s1,W,F:s1,W");
        assert_eq!(w.antecedent(1).unwrap(), Antecedent::First(Letter::F(1)));
        assert_eq!(w.antecedent(3).unwrap(), Antecedent::Index(1));
        assert_eq!(w.antecedent(4).unwrap(), Antecedent::Index(2));
        assert!(matches!(w.antecedent(5), Err(Error::IndexOutOfRange { index: 5, len: 4 })));
    }

    #[test]
    fn counts() {
        let w = g("F:s1,W,F:s1,W");
        assert_eq!(w.count_f(1, 3).unwrap(), 2);
        assert_eq!(w.count_w(4).unwrap(), 2);
        assert_eq!((w.count_f(1, 1).unwrap(), w.count_w(1).unwrap()), (1, 0));
        assert_eq!((sigma_sum(0), sigma_sum(3), sigma_sum(4)), (0, 6, 10));
    }

    #[test]
    fn admissibility() {
        let w = g("F:s1,W,F:s1,W");
        assert!(w.is_admissible(&parse_target("s1:2").unwrap()));
        assert!(!w.is_admissible(&parse_target("s1:1").unwrap()));
        assert!(g("F:s1,F:s2").is_admissible(&parse_target("s1:1,s2:1").unwrap()));
        assert!(g("W,W").is_admissible(&TargetResidue::new()));
    }

    #[test]
    fn genome_and_truncation() {
        assert_eq!(g("F:s1,W").genome(), "FW");
        assert_eq!(g("W,W").genome(), "WW");
        assert_eq!(g("F:s1,F:s2").genome(), "FF");
        let w = g("F:s1,W,F:s1");
        assert_eq!(w.truncate(2).unwrap(), g("F:s1,W"));
        assert_eq!(w.truncate(3).unwrap(), w);
        assert_eq!(w.truncate(1).unwrap().to_string(), "F:s1");
    }

    #[test]
    fn validation() {
        assert!(g("F:s1,F:s2").validate(2, 2).is_ok());
        assert!(g("F:s3").validate(2, 2).is_err());
        assert!(GeneWord::parse("").is_err());
        assert!(GeneWord::parse("X").is_err());
        assert_eq!(exponent_rank_mod_p(&[vec![2, 0], vec![0, 1]], 2), 1);
    }
}
