//! Numerical sup of the control ratio
//!
//!   phi(delta) = sup_lambda  (f(delta lambda) v f(-delta lambda))
//!                           / (g^{-1}(beta lambda) - g^{-1}(lambda))
//!
//! over a log-spaced lambda grid, in the weakened forms appropriate per
//! family: the nonnegative-state form for CIR/BESQ (numerator f(delta
//! lambda)) and the even / one-sided-monotone form for the signed families.
//! The denominator uses the exact (f, g^{-1}) pairing of each family's
//! lower-bound construction, all evaluated in log scale so the sup is
//! well-defined across the whole grid.

use crate::analytic::growth::{Growth, GrowthKind};
use crate::analytic::scale::Scale;
use crate::error::{Error, Result};
use crate::process::Family;

#[derive(Clone, Copy, Debug)]
pub struct LambdaGrid {
    pub lo: f64,
    pub hi: f64,
    pub points_per_decade: usize,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        // the condition is a sup over all lambda > 0; this window plus the
        // local refinement below is the documented numerical stand-in
        LambdaGrid {
            lo: 1e-4,
            hi: 1e4,
            points_per_decade: 32,
        }
    }
}

impl LambdaGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.hi / self.lo).log10();
        let n = ((decades * self.points_per_decade as f64).ceil() as usize).max(2);
        (0..=n)
            .map(|i| self.lo * (self.hi / self.lo).powf(i as f64 / n as f64))
            .collect()
    }
}

/// The exact (scale, inverse-growth) pairing used by phi.
fn phi_pair(family: &Family) -> Result<(Scale, Growth)> {
    let scale = Scale::for_family(family)?;
    let growth = match *family {
        Family::Ou { alpha } => Growth::new(GrowthKind::Ou { alpha }),
        Family::BmDrift { mu } | Family::ReflectedBmDrift { mu } => {
            Growth::new(GrowthKind::BmDriftExact { mu })
        }
        Family::Besq { .. } => Growth::new(GrowthKind::Besq),
        Family::Cir { a, b, c } => Growth::new(GrowthKind::Cir { a, b, c }),
        _ => {
            return Err(Error::domain(
                "compute_phi",
                "no phi pairing for this family",
            ))
        }
    };
    Ok((scale, growth))
}

fn ln_numerator(family: &Family, scale: &Scale, x: f64) -> Result<f64> {
    match family {
        // even or nonnegative: f(delta lambda) dominates
        Family::Ou { .. }
        | Family::ReflectedBmDrift { .. }
        | Family::Besq { .. }
        | Family::Cir { .. } => scale.ln_eval(x),
        // asymmetric: take the larger side explicitly
        Family::BmDrift { .. } => {
            let plus = scale.ln_eval(x)?;
            let minus = scale.ln_eval(-x)?;
            Ok(plus.max(minus))
        }
        _ => Err(Error::domain(
            "compute_phi",
            "no phi pairing for this family",
        )),
    }
}

/// sup over the grid, with one local refinement step around the argmax.
pub fn compute_phi(family: &Family, beta: f64, delta: f64, grid: &LambdaGrid) -> Result<f64> {
    if !(beta > 1.0) {
        return Err(Error::domain(
            "compute_phi",
            format!("beta must be > 1, got {beta}"),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(
            "compute_phi",
            format!("delta must be in (0,1), got {delta}"),
        ));
    }
    let (scale, growth) = phi_pair(family)?;
    let lambdas = grid.points();
    let ratio_ln = |lam: f64| -> Result<f64> {
        let num = ln_numerator(family, &scale, delta * lam)?;
        let den = growth.inverse_diff_ln(beta, lam)?;
        Ok(num - den)
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = 0usize;
    for (i, &lam) in lambdas.iter().enumerate() {
        let r = ratio_ln(lam)?;
        if r > best {
            best = r;
            best_idx = i;
        }
    }
    // one refinement at the geometric midpoints around the argmax
    let mut candidates = Vec::new();
    if best_idx > 0 {
        candidates.push((lambdas[best_idx - 1] * lambdas[best_idx]).sqrt());
    }
    if best_idx + 1 < lambdas.len() {
        candidates.push((lambdas[best_idx] * lambdas[best_idx + 1]).sqrt());
    }
    for lam in candidates {
        best = best.max(ratio_ln(lam)?);
    }
    Ok(best.exp())
}
