//! Bisection root finding.

use crate::error::ModelError;

/// Find the root of `f` inside `[lo, hi]` by bisection.
///
/// Requires a sign change over the bracket; converges when the bracket width
/// drops below `tol_x` or the iteration budget runs out.
pub fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol_x: f64,
    max_iter: u32,
) -> Result<f64, ModelError> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(ModelError::Bracket {
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol_x {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(ModelError::IterationLimit {
        iterations: max_iter,
        last: 0.5 * (lo + hi),
    })
}
