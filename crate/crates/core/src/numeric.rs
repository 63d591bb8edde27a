//! Scalar search primitives: golden-section minimization and bisection.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a scalar minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops once the bracket is narrower than `rel_tol * max(|a|, |b|)` or after
/// `max_iter` steps. The
/// best point ever evaluated is returned, endpoints included, so the result
/// never exceeds `min(f(a), f(b))` even when `f` is not unimodal.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut best = Minimum { x: a, fx: f(a) };
    let fb = f(b);
    if fb < best.fx {
        best = Minimum { x: b, fx: fb };
    }
    if a == b {
        return best;
    }

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..max_iter {
        if b - a <= rel_tol * a.abs().max(b.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        // Interior points can collapse onto each other once the bracket is a few ulps wide.
        if !(a < x1 && x1 <= x2 && x2 < b) {
            break;
        }
    }

    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx < best.fx {
            best = Minimum { x, fx };
        }
    }
    best
}

/// Bisection for a root of `f` on `[lo, hi]`, to absolute width `tol` in x.
///
/// Requires a sign change (or an exact zero at an endpoint).
pub fn bisect_root<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `x` in `[lo, hi]` with `feasible(x)`, assuming feasibility is
/// monotone (once true, true for all larger `x`) and `feasible(hi)` holds.
///
/// Returns the feasible end of the final bracket.
pub fn bisect_threshold<F>(feasible: F, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> bool,
{
    if feasible(lo) {
        return lo;
    }
    for _ in 0..max_iter {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn golden_finds_quadratic_minimum() {
        let m = golden_section_min(|x| (x - 1.3).powi(2) + 2.0, 0.0, 4.0, 1e-12, 200);
        assert_relative_eq!(m.x, 1.3, epsilon = 1e-7);
        assert_relative_eq!(m.fx, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn golden_returns_endpoint_for_monotone_function() {
        let m = golden_section_min(|x| x, 2.0, 5.0, 1e-12, 200);
        assert_eq!(m.x, 2.0);
        let m = golden_section_min(|x| -x, 2.0, 5.0, 1e-12, 200);
        assert_eq!(m.x, 5.0);
    }

    #[test]
    fn golden_degenerate_interval() {
        let m = golden_section_min(|x| x * x, 0.5, 0.5, 1e-12, 200);
        assert_eq!((m.x, m.fx), (0.5, 0.25));
    }

    #[test]
    fn bisect_root_cubic() {
        let r = bisect_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert_relative_eq!(r, 2f64.cbrt(), epsilon = 1e-13);
    }

    #[test]
    fn bisect_root_requires_bracket() {
        assert!(matches!(
            bisect_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn threshold_search() {
        let t = bisect_threshold(|x| x >= 3.7, 0.0, 10.0, 1e-12, 200);
        assert!(t >= 3.7 && t - 3.7 < 1e-10);
        assert_eq!(bisect_threshold(|_| true, 1.0, 10.0, 1e-12, 200), 1.0);
    }
}
