use std::fmt;

use crate::error::{Error, Result};

/// Checks that `p` is one of the supported primes.
pub fn check_prime(p: u64) -> Result<u8> {
    match p {
        2 | 3 | 5 => Ok(p as u8),
        _ => Err(Error::UnsupportedPrime(p)),
    }
}

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    value: u8,
    p: u8,
}

impl Scalar {
    pub fn new(value: i64, p: u8) -> Self {
        Scalar { value: value.rem_euclid(p as i64) as u8, p }
    }

    pub fn zero(p: u8) -> Self {
        Scalar { value: 0, p }
    }

    pub fn one(p: u8) -> Self {
        Scalar { value: 1, p }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn prime(self) -> u8 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        Some(Scalar { value: inv_mod(self.value, self.p), p: self.p })
    }
}

pub(crate) fn add_mod(a: u8, b: u8, p: u8) -> u8 {
    ((a as u16 + b as u16) % p as u16) as u8
}

pub(crate) fn mul_mod(a: u8, b: u8, p: u8) -> u8 {
    ((a as u16 * b as u16) % p as u16) as u8
}

pub(crate) fn neg_mod(a: u8, p: u8) -> u8 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(!a.is_multiple_of(p));
    (1..p).find(|&b| mul_mod(a, b, p) == 1).expect("prime modulus")
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar { value: add_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar { value: add_mod(self.value, neg_mod(o.value, self.p), self.p), p: self.p }
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar { value: mul_mod(self.value, o.value, self.p), p: self.p }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { value: neg_mod(self.value, self.p), p: self.p }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Solves `A x = b` over `F_p` by Gaussian elimination. Free variables are
/// set to zero. Returns `None` when the system is inconsistent.
pub fn solve_mod_p(mut a: Vec<Vec<u8>>, mut b: Vec<u8>, ncols: usize, p: u8) -> Option<Vec<u8>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(r) = (row..nrows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, r);
        b.swap(row, r);
        let inv = inv_mod(a[row][col], p);
        for c in 0..ncols {
            a[row][c] = mul_mod(a[row][c], inv, p);
        }
        b[row] = mul_mod(b[row], inv, p);
        for r2 in 0..nrows {
            if r2 != row && a[r2][col] != 0 {
                let f = a[r2][col];
                for c in 0..ncols {
                    let sub = mul_mod(f, a[row][c], p);
                    a[r2][c] = add_mod(a[r2][c], neg_mod(sub, p), p);
                }
                let sub = mul_mod(f, b[row], p);
                b[r2] = add_mod(b[r2], neg_mod(sub, p), p);
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if b[row..].iter().any(|&v| v != 0) {
        return None;
    }
    let mut x = vec![0u8; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::new(2, 3);
        assert_eq!((a * a).value(), 1);
        assert_eq!(a.inv().unwrap().value(), 2);
        assert_eq!((-a).value(), 1);
        assert!(Scalar::zero(5).inv().is_none());
        assert_eq!(Scalar::new(-1, 5).value(), 4);
    }

    #[test]
    fn rejects_large_primes() {
        assert!(check_prime(7).is_err());
        assert_eq!(check_prime(3).unwrap(), 3);
    }

    #[test]
    fn mod_p_solver() {
        // x + y = 1, y = 1 over F_2
        let a = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(solve_mod_p(a, vec![1, 1], 2, 2), Some(vec![0, 1]));
        let a = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(solve_mod_p(a, vec![1, 0], 2, 2), None);
    }
}
