#![allow(dead_code, clippy::needless_range_loop)]

use asw_tower::algebra::{FieldCtx, FieldElem};
use asw_tower::valued_field::{valuation, Valuation};
use num_rational::Rational64;
use rand::Rng;

pub fn k(p: u64, r: usize) -> FieldCtx {
    FieldCtx::new(p, r).unwrap()
}

/// A sparse Laurent polynomial in `s_1..s_r, t`, occasionally divided by
/// `1 + s_1` or `1 + t`.
pub fn random_field<R: Rng>(rng: &mut R, ctx: &FieldCtx, tmin: i64, tmax: i64) -> FieldElem {
    let p = ctx.p as i64;
    let mut x = ctx.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0i64; ctx.nvars()];
        for j in 0..ctx.r {
            e[j] = rng.gen_range(0..=2);
        }
        e[ctx.t_index()] = rng.gen_range(tmin..=tmax);
        x = x.add(&ctx.monomial(&e, rng.gen_range(1..p)));
    }
    match rng.gen_range(0..6) {
        0 if ctx.r > 0 => x.div(&ctx.one().add(&ctx.s(1))).unwrap(),
        1 => x.div(&ctx.one().add(&ctx.t())).unwrap(),
        _ => x,
    }
}

/// Determinant by Gaussian elimination over `K`.
pub fn det(ctx: &FieldCtx, mut m: Vec<Vec<FieldElem>>) -> FieldElem {
    let n = m.len();
    let mut acc = ctx.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return ctx.zero();
        };
        if piv != c {
            m.swap(piv, c);
            acc = acc.neg();
        }
        let pv = m[c][c].clone();
        acc = acc.mul(&pv);
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].div(&pv).unwrap();
            for cc in c..n {
                let d = f.mul(&m[c][cc]);
                m[r][cc] = m[r][cc].sub(&d);
            }
        }
    }
    acc
}

/// Solves `a x = b` (square, invertible) by Gauss-Jordan elimination.
pub fn solve(mut a: Vec<Vec<FieldElem>>, mut b: Vec<FieldElem>) -> Vec<FieldElem> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular system");
        a.swap(piv, c);
        b.swap(piv, c);
        let pv = a[c][c].clone();
        for cc in 0..n {
            a[c][cc] = a[c][cc].div(&pv).unwrap();
        }
        b[c] = b[c].div(&pv).unwrap();
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for cc in 0..n {
                let d = f.mul(&a[c][cc]);
                a[r][cc] = a[r][cc].sub(&d);
            }
            b[r] = b[r].sub(&f.mul(&b[c]));
        }
    }
    b
}

fn mat_mul(a: &[Vec<FieldElem>], b: &[Vec<FieldElem>], zero: &FieldElem) -> Vec<Vec<FieldElem>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(zero.clone(), |s, k| s.add(&a[i][k].mul(&b[k][j])))).collect()).collect()
}

/// Characteristic polynomial `c_0 + ... + c_p Y^p` of multiplication by
/// `u = sum_k coeffs[k] x^k` on `K[x]/(x^p - x - rhs)`, via the companion
/// matrix.
pub fn char_poly_as(ctx: &FieldCtx, rhs: &FieldElem, coeffs: &[FieldElem]) -> Vec<FieldElem> {
    let p = ctx.p as usize;
    let zero = ctx.zero();
    // x * x^k = x^{k+1}; x * x^{p-1} = rhs + x.
    let mut x = vec![vec![zero.clone(); p]; p];
    for k in 0..p - 1 {
        x[k + 1][k] = ctx.one();
    }
    x[0][p - 1] = rhs.clone();
    x[1 % p][p - 1] = x[1 % p][p - 1].add(&ctx.one());
    let mut pw: Vec<Vec<FieldElem>> =
        (0..p).map(|i| (0..p).map(|j| if i == j { ctx.one() } else { zero.clone() }).collect()).collect();
    let mut m = vec![vec![zero.clone(); p]; p];
    for c in coeffs {
        for i in 0..p {
            for j in 0..p {
                m[i][j] = m[i][j].add(&c.mul(&pw[i][j]));
            }
        }
        pw = mat_mul(&pw, &x, &zero);
    }
    // Coefficient of Y^{p-k} is (-1)^k times the sum of the k x k principal minors.
    let mut c = vec![zero.clone(); p + 1];
    for mask in 0u32..(1 << p) {
        let idx: Vec<usize> = (0..p).filter(|i| mask >> i & 1 == 1).collect();
        let k = idx.len();
        let minor = if k == 0 {
            ctx.one()
        } else {
            det(ctx, idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect())
        };
        let term = if k % 2 == 1 { minor.neg() } else { minor };
        c[p - k] = c[p - k].add(&term);
    }
    c
}

/// Valuation of a root of a monic polynomial whose roots all share one
/// valuation; panics unless the Newton polygon is a single segment.
pub fn newton_root_valuation(ctx: &FieldCtx, c: &[FieldElem]) -> Valuation {
    let d = c.len() - 1;
    let v0 = match valuation(ctx, &c[0]) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return Valuation::Infinite,
    };
    assert_eq!(valuation(ctx, &c[d]), Valuation::int(0), "not monic");
    let slope = v0 / Rational64::from(d as i64);
    for (k, ck) in c.iter().enumerate() {
        if let Valuation::Finite(v) = valuation(ctx, ck) {
            let line = v0 - slope * Rational64::from(k as i64);
            assert!(v >= line, "Newton polygon has more than one segment");
        }
    }
    Valuation::Finite(slope)
}
