//! Pointwise sandwich checks:
//!
//!  - (1/2mu) log(mu sqrt(x) + 1) <= g_mu(x) <= (2/mu) log(mu sqrt(x) + 1)
//!  - f1 <= f <= f2 for CIR, with
//!    f1 = c^2/(a |b| 2^{2a/c^2}) (e^{|b| x / c^2} - 1) and
//!    f2 = c^2/(2 a |b|) (e^{2 |b| x / c^2} - 1)
//!  - the OU inverse-growth property g^{-1}(a x) >= a^2 g^{-1}(x)
//!
//! Slack is reported after relative normalization; large arguments are
//! compared in log scale.

use crate::analytic::fmu::ln_expm1;
use crate::analytic::growth::{Growth, GrowthKind};
use crate::analytic::scale::{Scale, ScaleKind};
use crate::error::Result;

#[derive(Clone, Copy, Debug)]
pub struct SandwichOutcome {
    /// minimum normalized slack over the grid (>= -1e-10 passes)
    pub min_slack: f64,
    /// argument at which the minimum was attained
    pub worst_x: f64,
}

pub const SLACK_TOL: f64 = -1e-10;

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Two-sided bracket for g_mu = f_mu^{-1}.
pub fn bm_drift_g_sandwich(mu: f64, grid: &[f64]) -> Result<SandwichOutcome> {
    let g = Growth::new(GrowthKind::BmDriftExact { mu });
    let mut out = SandwichOutcome {
        min_slack: f64::INFINITY,
        worst_x: f64::NAN,
    };
    for &x in grid {
        let gm = g.eval(x)?;
        let envelope = (mu * x.sqrt()).ln_1p();
        let lo = envelope / (2.0 * mu);
        let hi = 2.0 * envelope / mu;
        let s_lo = (gm - lo) / gm.max(f64::MIN_POSITIVE);
        let s_hi = (hi - gm) / hi.max(f64::MIN_POSITIVE);
        for s in [s_lo, s_hi] {
            if s < out.min_slack {
                out.min_slack = s;
                out.worst_x = x;
            }
        }
    }
    Ok(out)
}

/// f1 <= f <= f2 for the CIR scale function, log-scale beyond overflow.
pub fn cir_f_sandwich(a: f64, b: f64, c: f64, grid: &[f64]) -> Result<SandwichOutcome> {
    let scale = Scale::new(ScaleKind::Cir { a, b, c });
    let theta = 2.0 * a / (c * c);
    let q = -b / (c * c); // > 0
    let ln_c1 = (c * c / (a * (-b))).ln() - theta * 2.0f64.ln();
    let ln_c2 = (c * c / (2.0 * a * (-b))).ln();
    let mut out = SandwichOutcome {
        min_slack: f64::INFINITY,
        worst_x: f64::NAN,
    };
    for &x in grid {
        let ln_f1 = ln_c1 + ln_expm1(q * x);
        let ln_f2 = ln_c2 + ln_expm1(2.0 * q * x);
        let ln_f = scale.ln_eval(x)?;
        // relative slack: 1 - f1/f and 1 - f/f2
        let s_lo = -(ln_f1 - ln_f).exp_m1();
        let s_hi = -(ln_f - ln_f2).exp_m1();
        for s in [s_lo, s_hi] {
            if s < out.min_slack {
                out.min_slack = s;
                out.worst_x = x;
            }
        }
    }
    Ok(out)
}

/// g^{-1}(a x) >= a^2 g^{-1}(x) for the OU inverse growth, any a > 1.
pub fn ou_inverse_growth(alpha: f64, a: f64, grid: &[f64]) -> Result<SandwichOutcome> {
    let g = Growth::new(GrowthKind::Ou { alpha });
    let mut out = SandwichOutcome {
        min_slack: f64::INFINITY,
        worst_x: f64::NAN,
    };
    for &x in grid {
        let lhs = g.inverse_ln(a * x)?;
        let rhs = 2.0 * a.ln() + g.inverse_ln(x)?;
        // slack as a relative value: 1 - rhs_value / lhs_value
        let s = -(rhs - lhs).exp_m1();
        if s < out.min_slack {
            out.min_slack = s;
            out.worst_x = x;
        }
    }
    Ok(out)
}
