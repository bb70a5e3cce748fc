use num_rational::Rational64;

use super::Valuation;

/// One edge of a Newton polygon: `length` roots of valuation `root_valuation`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NewtonSegment {
    pub root_valuation: Rational64,
    pub length: usize,
}

/// Lower convex hull of the points `(i, v(c_i))` for a polynomial
/// `sum c_i X^i`, read as root valuations from the smallest degree up.
pub fn newton_slopes(coeff_vals: &[Valuation]) -> Vec<NewtonSegment> {
    let pts: Vec<(i64, Rational64)> =
        coeff_vals.iter().enumerate().filter_map(|(i, v)| v.finite().map(|v| (i as i64, v))).collect();
    let mut hull: Vec<(i64, Rational64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a -> pt
            let lhs = (b.1 - a.1) * Rational64::from_integer(pt.0 - a.0);
            let rhs = (pt.1 - a.1) * Rational64::from_integer(b.0 - a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| {
            let slope = (w[1].1 - w[0].1) / Rational64::from_integer(w[1].0 - w[0].0);
            NewtonSegment { root_valuation: -slope, length: (w[1].0 - w[0].0) as usize }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> Valuation {
        Valuation::int(x)
    }

    #[test]
    fn single_slope_eisenstein_like() {
        // X^2 + t^-1: roots of valuation -1/2
        let segs = newton_slopes(&[v(-1), Valuation::Infinite, v(0)]);
        assert_eq!(segs, vec![NewtonSegment { root_valuation: Rational64::new(-1, 2), length: 2 }]);
    }

    #[test]
    fn two_slopes() {
        // (X - t)(X - t^-1) = X^2 - (t + 1/t) X + 1
        let segs = newton_slopes(&[v(0), v(-1), v(0)]);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].root_valuation, Rational64::from_integer(1));
        assert_eq!(segs[1].root_valuation, Rational64::from_integer(-1));
    }
}
