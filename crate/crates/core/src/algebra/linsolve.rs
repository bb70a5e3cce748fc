//! Linear systems over `K` by fraction-free Gaussian elimination.

use super::field::FieldElem;
use crate::error::{Error, Result};

/// Solves `A x = b`. Pivots are chosen as the first row (in row order)
/// with a nonzero entry in the current column; free variables are set to
/// zero. Rows are combined fraction-free and divisions only happen during
/// back substitution.
pub fn linear_solve(a: &[Vec<FieldElem>], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("{}x? matrix with rhs of length {}", n, b.len())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let zero = b[0].sub(&b[0]);
    let mut rows: Vec<Vec<FieldElem>> = a.to_vec();
    let mut rhs: Vec<FieldElem> = b.to_vec();
    let mut used = vec![false; n];
    // (column, pivot row)
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..n {
        let Some(pr) = (0..n).find(|&r| !used[r] && !rows[r][col].is_zero()) else { continue };
        used[pr] = true;
        pivots.push((col, pr));
        let pv = rows[pr][col].clone();
        for r in 0..n {
            if used[r] || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..n {
                let v = rows[r][c].mul(&pv).sub(&rows[pr][c].mul(&f));
                rows[r][c] = v;
            }
            rhs[r] = rhs[r].mul(&pv).sub(&rhs[pr].mul(&f));
        }
    }
    for r in 0..n {
        if !used[r] && !rhs[r].is_zero() {
            return Err(Error::NoSolution);
        }
    }
    let mut x = vec![zero; n];
    for &(col, pr) in pivots.iter().rev() {
        let mut acc = rhs[pr].clone();
        for c in col + 1..n {
            if !rows[pr][c].is_zero() && !x[c].is_zero() {
                acc = acc.sub(&rows[pr][c].mul(&x[c]));
            }
        }
        x[col] = acc.div(&rows[pr][col])?;
    }
    Ok(x)
}

/// `A x` for a square matrix.
pub fn mat_vec(a: &[Vec<FieldElem>], x: &[FieldElem]) -> Vec<FieldElem> {
    a.iter()
        .map(|row| {
            row.iter().zip(x).fold(x[0].sub(&x[0]), |acc, (r, v)| if r.is_zero() { acc } else { acc.add(&r.mul(v)) })
        })
        .collect()
}
