//! Growth functions g (strictly increasing, continuous, g(0) = 0) and their
//! inverses for every process family, with log-argument and log-value forms
//! so round trips stay exact far beyond the f64 overflow range.

use crate::analytic::fmu::{f_mu, ln_expm1, ln_f_mu, softplus};
use crate::analytic::root::{bracket_upward, solve_increasing};
use crate::error::{Error, Result};
use crate::process::Family;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthKind {
    /// log^{1/2}(1 + alpha t)
    Ou { alpha: f64 },
    /// log(mu sqrt(t) + 1), the closed-form envelope growth
    BmDriftLog { mu: f64 },
    /// g_mu = f_mu^{-1}, the exact scale-function inverse (root-finding)
    BmDriftExact { mu: f64 },
    /// -(c^2 / 2b) log(1 - (2ab/c^2) t)
    Cir { a: f64, b: f64, c: f64 },
    /// t
    Besq,
    /// sqrt(t)
    Bessel,
    /// log^{1/2}(1 + alpha beta t)
    RadialOu { ab: f64 },
    /// log^{1/2}(1 + 2a t)
    ComplexOu { a: f64 },
    /// sqrt(t)
    ComplexBm,
    /// log^{1/2}(1 + log(1 + t)), for the time-normalized modulus
    ComplexBmNormalized,
}

#[derive(Clone, Copy, Debug)]
pub struct Growth {
    kind: GrowthKind,
}

impl Growth {
    pub fn new(kind: GrowthKind) -> Self {
        Growth { kind }
    }

    /// The envelope growth function of a process family.
    pub fn for_family(family: &Family) -> Growth {
        let kind = match *family {
            Family::Ou { alpha } => GrowthKind::Ou { alpha },
            Family::BmDrift { mu } | Family::ReflectedBmDrift { mu } => {
                GrowthKind::BmDriftLog { mu }
            }
            Family::Cir { a, b, c } => GrowthKind::Cir { a, b, c },
            Family::Besq { .. } => GrowthKind::Besq,
            Family::Bessel { .. } => GrowthKind::Bessel,
            Family::RadialOu { alpha, beta } => GrowthKind::RadialOu { ab: alpha * beta },
            Family::ComplexOu { a, .. } => GrowthKind::ComplexOu { a },
            Family::ComplexBm => GrowthKind::ComplexBm,
        };
        Growth { kind }
    }

    pub fn kind(&self) -> GrowthKind {
        self.kind
    }

    /// g(t), numerically stable for t up to 1e12 and beyond (log1p forms).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain("g_eval", format!("t must be >= 0, got {t}")));
        }
        Ok(match self.kind {
            GrowthKind::Ou { alpha } => (alpha * t).ln_1p().sqrt(),
            GrowthKind::BmDriftLog { mu } => (mu * t.sqrt()).ln_1p(),
            GrowthKind::BmDriftExact { mu } => {
                if t == 0.0 {
                    0.0
                } else {
                    let hi = bracket_upward(|x| ln_f_mu(mu, x), t.ln(), 1.0)?;
                    solve_increasing(|x| ln_f_mu(mu, x), t.ln(), 0.0, hi)?
                }
            }
            GrowthKind::Cir { a, b, c } => {
                -c * c / (2.0 * b) * (-2.0 * a * b / (c * c) * t).ln_1p()
            }
            GrowthKind::Besq => t,
            GrowthKind::Bessel | GrowthKind::ComplexBm => t.sqrt(),
            GrowthKind::RadialOu { ab } => (ab * t).ln_1p().sqrt(),
            GrowthKind::ComplexOu { a } => (2.0 * a * t).ln_1p().sqrt(),
            GrowthKind::ComplexBmNormalized => t.ln_1p().ln_1p().sqrt(),
        })
    }

    /// g(e^L): evaluation from a log-scale time, for arguments whose linear
    /// form overflows.
    pub fn eval_ln_arg(&self, ln_t: f64) -> f64 {
        match self.kind {
            GrowthKind::Ou { alpha } => softplus(alpha.ln() + ln_t).sqrt(),
            GrowthKind::BmDriftLog { mu } => softplus(mu.ln() + 0.5 * ln_t),
            GrowthKind::BmDriftExact { mu } => {
                let hi = bracket_upward(|x| ln_f_mu(mu, x), ln_t, 1.0).expect("bracket");
                solve_increasing(|x| ln_f_mu(mu, x), ln_t, 0.0, hi).expect("monotone solve")
            }
            GrowthKind::Cir { a, b, c } => {
                -c * c / (2.0 * b) * softplus((-2.0 * a * b / (c * c)).ln() + ln_t)
            }
            GrowthKind::Besq => ln_t.exp(),
            GrowthKind::Bessel | GrowthKind::ComplexBm => (0.5 * ln_t).exp(),
            GrowthKind::RadialOu { ab } => softplus(ab.ln() + ln_t).sqrt(),
            GrowthKind::ComplexOu { a } => softplus((2.0 * a).ln() + ln_t).sqrt(),
            GrowthKind::ComplexBmNormalized => softplus(ln_t).ln_1p().sqrt(),
        }
    }

    /// g^{-1}(y). May overflow to +inf for growths with exponential
    /// inverses; use `inverse_ln` in that regime.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::domain(
                "g_inverse",
                format!("y must be >= 0, got {y}"),
            ));
        }
        Ok(match self.kind {
            GrowthKind::Ou { alpha } => (y * y).exp_m1() / alpha,
            GrowthKind::BmDriftLog { mu } => {
                let r = y.exp_m1() / mu;
                r * r
            }
            GrowthKind::BmDriftExact { mu } => f_mu(mu, y),
            GrowthKind::Cir { a, b, c } => {
                c * c * (-2.0 * b * y / (c * c)).exp_m1() / (2.0 * a * (-b))
            }
            GrowthKind::Besq => y,
            GrowthKind::Bessel | GrowthKind::ComplexBm => y * y,
            GrowthKind::RadialOu { ab } => (y * y).exp_m1() / ab,
            GrowthKind::ComplexOu { a } => (y * y).exp_m1() / (2.0 * a),
            GrowthKind::ComplexBmNormalized => (y * y).exp_m1().exp_m1(),
        })
    }

    /// ln g^{-1}(y), stable far into the overflow regime of `inverse`.
    /// For the doubly exponential inverse this itself overflows once
    /// e^{y^2} exceeds the f64 range; that is a representability limit of
    /// the format, not of the formula.
    pub fn inverse_ln(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::domain(
                "g_inverse",
                format!("y must be >= 0, got {y}"),
            ));
        }
        if y == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(match self.kind {
            GrowthKind::Ou { alpha } => ln_expm1(y * y) - alpha.ln(),
            GrowthKind::BmDriftLog { mu } => 2.0 * (ln_expm1(y) - mu.ln()),
            GrowthKind::BmDriftExact { mu } => ln_f_mu(mu, y),
            GrowthKind::Cir { a, b, c } => {
                (c * c / (2.0 * a * (-b))).ln() + ln_expm1(-2.0 * b * y / (c * c))
            }
            GrowthKind::Besq => y.ln(),
            GrowthKind::Bessel | GrowthKind::ComplexBm => 2.0 * y.ln(),
            GrowthKind::RadialOu { ab } => ln_expm1(y * y) - ab.ln(),
            GrowthKind::ComplexOu { a } => ln_expm1(y * y) - (2.0 * a).ln(),
            GrowthKind::ComplexBmNormalized => ln_expm1((y * y).exp_m1()),
        })
    }

    /// Largest y for which `inverse_ln` stays finite in f64.
    pub fn inverse_ln_max_y(&self) -> f64 {
        match self.kind {
            GrowthKind::ComplexBmNormalized => 26.0,
            _ => 1e8,
        }
    }

    /// ln(g^{-1}(beta * lambda) - g^{-1}(lambda)) for beta > 1, computed
    /// without overflow or cancellation.
    pub fn inverse_diff_ln(&self, beta: f64, lambda: f64) -> Result<f64> {
        if !(beta > 1.0) {
            return Err(Error::domain(
                "inverse_diff",
                format!("beta must be > 1, got {beta}"),
            ));
        }
        if !(lambda > 0.0) {
            return Err(Error::domain(
                "inverse_diff",
                format!("lambda must be > 0, got {lambda}"),
            ));
        }
        let l2 = lambda * lambda;
        Ok(match self.kind {
            // (e^{b^2 l^2} - e^{l^2}) / alpha
            GrowthKind::Ou { alpha } => {
                beta * beta * l2 + (-((1.0 - beta * beta) * l2).exp_m1()).ln() - alpha.ln()
            }
            GrowthKind::ComplexOu { a } => {
                beta * beta * l2 + (-((1.0 - beta * beta) * l2).exp_m1()).ln() - (2.0 * a).ln()
            }
            GrowthKind::RadialOu { ab } => {
                beta * beta * l2 + (-((1.0 - beta * beta) * l2).exp_m1()).ln() - ab.ln()
            }
            GrowthKind::Besq => ((beta - 1.0) * lambda).ln(),
            GrowthKind::Bessel | GrowthKind::ComplexBm => ((beta * beta - 1.0) * l2).ln(),
            GrowthKind::Cir { a, b, c } => {
                let q = -2.0 * b / (c * c);
                (c * c / (2.0 * a * (-b))).ln()
                    + q * beta * lambda
                    + (-(-q * (beta - 1.0) * lambda).exp_m1()).ln()
            }
            GrowthKind::BmDriftExact { mu } => {
                if 2.0 * mu * beta * lambda <= 600.0 {
                    (f_mu(mu, beta * lambda) - f_mu(mu, lambda)).ln()
                } else {
                    let (la, lb) = (ln_f_mu(mu, beta * lambda), ln_f_mu(mu, lambda));
                    la + (-(lb - la).exp()).ln_1p()
                }
            }
            GrowthKind::BmDriftLog { .. } => {
                let (ga, gb) = (self.inverse(beta * lambda)?, self.inverse(lambda)?);
                if ga.is_finite() {
                    (ga - gb).ln()
                } else {
                    let (la, lb) = (self.inverse_ln(beta * lambda)?, self.inverse_ln(lambda)?);
                    la + (-(lb - la).exp()).ln_1p()
                }
            }
            GrowthKind::ComplexBmNormalized => {
                let (ga, gb) = (self.inverse(beta * lambda)?, self.inverse(lambda)?);
                if ga.is_finite() {
                    (ga - gb).ln()
                } else {
                    let (la, lb) = (self.inverse_ln(beta * lambda)?, self.inverse_ln(lambda)?);
                    la + (-(lb - la).exp()).ln_1p()
                }
            }
        })
    }

    /// Display string for the catalog listing.
    pub fn formula(&self) -> String {
        match self.kind {
            GrowthKind::Ou { .. } => "log^{1/2}(1+αt)".into(),
            GrowthKind::BmDriftLog { .. } => "log(μ√t+1)".into(),
            GrowthKind::BmDriftExact { .. } => "f_μ^{-1}(t) (root-finding)".into(),
            GrowthKind::Cir { .. } => "-(c²/2b)·log(1-(2ab/c²)t)".into(),
            GrowthKind::Besq => "t".into(),
            GrowthKind::Bessel => "√t".into(),
            GrowthKind::RadialOu { .. } => "log^{1/2}(1+αβt)".into(),
            GrowthKind::ComplexOu { .. } => "log^{1/2}(1+2at)".into(),
            GrowthKind::ComplexBm => "√t".into(),
            GrowthKind::ComplexBmNormalized => "log^{1/2}(1+log(1+t))".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ou_identity_point() {
        // log(1 + (e-1)) = 1
        let g = Growth::new(GrowthKind::Ou { alpha: 1.0 });
        assert_relative_eq!(
            g.eval(std::f64::consts::E - 1.0).unwrap(),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn cir_closed_form_point() {
        // (a,b,c) = (1,-1,2), t = 3: 2 log(5/2)
        let g = Growth::new(GrowthKind::Cir {
            a: 1.0,
            b: -1.0,
            c: 2.0,
        });
        assert_relative_eq!(g.eval(3.0).unwrap(), 1.8325814637483101, epsilon = 1e-13);
    }

    #[test]
    fn ou_inverse_closed_form() {
        let g = Growth::new(GrowthKind::Ou { alpha: 2.0 });
        assert_relative_eq!(g.inverse(1.0).unwrap(), 0.8591409142295226, epsilon = 1e-13);
    }

    #[test]
    fn zero_maps_to_zero_everywhere() {
        for kind in all_kinds() {
            let g = Growth::new(kind);
            assert_eq!(g.eval(0.0).unwrap(), 0.0, "{kind:?}");
            assert_eq!(g.inverse(0.0).unwrap(), 0.0, "{kind:?}");
        }
    }

    #[test]
    fn negative_arguments_rejected() {
        let g = Growth::new(GrowthKind::Besq);
        assert!(g.eval(-1.0).is_err());
        assert!(g.inverse(-0.5).is_err());
    }

    #[test]
    fn bm_drift_exact_round_trip_through_f_mu() {
        // g_mu(f_mu(1)) = 1 with f_mu(1) = (e^2 - 3)/2
        let g = Growth::new(GrowthKind::BmDriftExact { mu: 1.0 });
        let fm1 = g.inverse(1.0).unwrap();
        assert_relative_eq!(fm1, 2.194528049465325, epsilon = 1e-13);
        assert_relative_eq!(g.eval(fm1).unwrap(), 1.0, epsilon = 1e-10);
    }

    fn all_kinds() -> Vec<GrowthKind> {
        vec![
            GrowthKind::Ou { alpha: 1.0 },
            GrowthKind::BmDriftLog { mu: 1.0 },
            GrowthKind::BmDriftExact { mu: 1.0 },
            GrowthKind::Cir {
                a: 1.0,
                b: -1.0,
                c: 2.0,
            },
            GrowthKind::Besq,
            GrowthKind::Bessel,
            GrowthKind::RadialOu { ab: 1.0 },
            GrowthKind::ComplexOu { a: 1.0 },
            GrowthKind::ComplexBm,
            GrowthKind::ComplexBmNormalized,
        ]
    }

    #[test]
    fn round_trip_all_kinds_wide_range() {
        // |g(g^{-1}(y)) - y| <= 1e-10 (1 + y) over a log grid, using the
        // log-scale forms once the linear inverse overflows
        for kind in all_kinds() {
            let g = Growth::new(kind);
            let y_hi: f64 = match kind {
                GrowthKind::ComplexBmNormalized => g.inverse_ln_max_y(),
                _ => 1e3,
            };
            let y_lo: f64 = 1e-6;
            let n = 64;
            for i in 0..n {
                let y = y_lo * (y_hi / y_lo).powf(i as f64 / (n - 1) as f64);
                let t = g.inverse(y).unwrap();
                let back = if t.is_finite() {
                    g.eval(t).unwrap()
                } else {
                    g.eval_ln_arg(g.inverse_ln(y).unwrap())
                };
                assert!(
                    (back - y).abs() <= 1e-10 * (1.0 + y),
                    "{kind:?}: y={y} back={back}"
                );
            }
        }
    }

    #[test]
    fn stable_for_huge_times() {
        let g = Growth::new(GrowthKind::Ou { alpha: 1.0 });
        let v = g.eval(1e12).unwrap();
        assert_relative_eq!(v, (1e12f64.ln_1p()).sqrt(), epsilon = 1e-13);
        assert!(g.eval(1e12).unwrap().is_finite());
    }
}
