//! Bracketed root finding for monotone functions: bisection with a secant
//! acceleration step, 200-iteration cap, relative tolerance on the argument.

use crate::error::{Error, Result};

pub const MAX_ITER: usize = 200;
pub const REL_TOL: f64 = 1e-12;

/// Solve h(t) = target for increasing `h` on [lo, hi]. Requires
/// h(lo) <= target <= h(hi); non-finite h values inside the bracket are
/// treated as +infinity (overflow of an increasing function).
pub fn solve_increasing<F: Fn(f64) -> f64>(
    h: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    let mut flo = h(lo) - target;
    let fhi = h(hi);
    let mut fhi = if fhi.is_nan() {
        f64::INFINITY
    } else {
        fhi - target
    };
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::RootFind(format!(
            "target {target} not bracketed on [{lo}, {hi}] (h(lo)-y={flo}, h(hi)-y={fhi})"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    for _ in 0..MAX_ITER {
        if hi - lo <= REL_TOL * (lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)) {
            break;
        }
        // secant proposal, clipped into the middle 80% of the bracket
        let mid = 0.5 * (lo + hi);
        let t = if fhi.is_finite() && flo.is_finite() && fhi != flo {
            let s = lo - flo * (hi - lo) / (fhi - flo);
            let (bl, bh) = (lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo));
            if s > bl && s < bh {
                s
            } else {
                mid
            }
        } else {
            mid
        };
        let ft = {
            let v = h(t);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v - target
            }
        };
        if ft == 0.0 {
            return Ok(t);
        }
        if ft < 0.0 {
            lo = t;
            flo = ft;
        } else {
            hi = t;
            fhi = ft;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Find an upper bracket for an increasing function: doubles `hi` until
/// h(hi) >= target (overflow counts as exceeding).
pub fn bracket_upward<F: Fn(f64) -> f64>(h: F, target: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..1100 {
        let v = h(hi);
        if v.is_nan() || v >= target {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::RootFind(format!(
        "no upper bracket for target {target}"
    )))
}
