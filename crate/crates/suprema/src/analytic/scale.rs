//! Scale-type functions f solving the generator equation Lf = 1 with
//! f(0) = 0, one per one-dimensional family:
//!
//!   OU         f(x) = 2 ∫_0^x e^{α u²} ∫_0^u e^{-α v²} dv du   (even)
//!   BM drift   f(x) = (e^{2μx} - 2μx - 1) / (2μ²)
//!   reflected  f(x) = f_mu(|x|)
//!   BESQ       f(x) = x / α
//!   CIR        f(x) = (2/c²) ∫_0^x t^{-θ} e^{-κt} ∫_0^t s^{θ-1} e^{κs} ds dt,
//!              θ = 2a/c², κ = 2b/c² < 0
//!
//! The CIR inner integrand is singular at 0 when θ < 1; the inner integral
//! over [0, s0] is summed analytically as s0^θ Σ (κ s0)^k / (k! (θ+k)), and
//! the outer integrand near 0 uses the same series so the t^{±θ} factors
//! cancel in closed form. Both quadrature-backed families expose log-scale
//! evaluation past the e^x overflow range via a Laplace window at the upper
//! endpoint.

use crate::analytic::fmu::{f_mu, f_mu_prime, ln_f_mu};
use crate::analytic::quad::integrate;
use crate::error::{Error, Result};
use crate::process::{sign0, Family};

/// arguments beyond this exponent scale are served by `ln_eval` only
const OVERFLOW_EXPONENT: f64 = 600.0;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScaleKind {
    Ou { alpha: f64 },
    BmDrift { mu: f64 },
    ReflectedBmDrift { mu: f64 },
    Besq { alpha: f64 },
    Cir { a: f64, b: f64, c: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct Scale {
    kind: ScaleKind,
}

#[derive(Clone, Copy, Debug)]
pub struct Eval {
    pub value: f64,
    /// accumulated quadrature error estimate (0 for closed forms)
    pub error: f64,
}

impl Scale {
    pub fn new(kind: ScaleKind) -> Self {
        Scale { kind }
    }

    pub fn for_family(family: &Family) -> Result<Scale> {
        let kind = match *family {
            Family::Ou { alpha } => ScaleKind::Ou { alpha },
            Family::BmDrift { mu } => ScaleKind::BmDrift { mu },
            Family::ReflectedBmDrift { mu } => ScaleKind::ReflectedBmDrift { mu },
            Family::Besq { alpha } => ScaleKind::Besq { alpha },
            Family::Cir { a, b, c } => ScaleKind::Cir { a, b, c },
            _ => {
                return Err(Error::domain(
                    "scale",
                    format!("no scale function for family {}", family.name()),
                ))
            }
        };
        Ok(Scale { kind })
    }

    pub fn kind(&self) -> ScaleKind {
        self.kind
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let nonneg = matches!(self.kind, ScaleKind::Besq { .. } | ScaleKind::Cir { .. });
        if nonneg && !(x >= 0.0) {
            return Err(Error::domain("f_eval", format!("x must be >= 0, got {x}")));
        }
        if !x.is_finite() {
            return Err(Error::domain("f_eval", "x must be finite"));
        }
        Ok(())
    }

    /// f(x) with its quadrature error estimate. Errors out in the overflow
    /// regime (use `ln_eval` there).
    pub fn eval_with_error(&self, x: f64) -> Result<Eval> {
        self.check_domain(x)?;
        match self.kind {
            ScaleKind::Besq { alpha } => Ok(Eval {
                value: x / alpha,
                error: 0.0,
            }),
            ScaleKind::BmDrift { mu } => Ok(Eval {
                value: f_mu(mu, x),
                error: 0.0,
            }),
            ScaleKind::ReflectedBmDrift { mu } => Ok(Eval {
                value: f_mu(mu, x.abs()),
                error: 0.0,
            }),
            ScaleKind::Ou { alpha } => {
                let u = x.abs();
                if alpha * u * u > OVERFLOW_EXPONENT + 100.0 {
                    return Err(Error::domain(
                        "f_eval",
                        format!(
                            "alpha x^2 = {} is in the overflow regime; use ln_eval",
                            alpha * u * u
                        ),
                    ));
                }
                let q = integrate(&|v| ou_integrand(alpha, v), 0.0, u, REL_TOL, 1e-300);
                Ok(Eval {
                    value: q.value,
                    error: q.error,
                })
            }
            ScaleKind::Cir { a, b, c } => {
                let (theta, kappa) = cir_exponents(a, b, c);
                if -kappa * x > OVERFLOW_EXPONENT + 100.0 {
                    return Err(Error::domain(
                        "f_eval",
                        format!(
                            "|kappa| x = {} is in the overflow regime; use ln_eval",
                            -kappa * x
                        ),
                    ));
                }
                let q = integrate(
                    &|t| cir_outer_integrand(theta, kappa, t),
                    0.0,
                    x,
                    REL_TOL,
                    1e-300,
                );
                Ok(Eval {
                    value: 2.0 / (c * c) * q.value,
                    error: 2.0 / (c * c) * q.error,
                })
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_with_error(x)?.value)
    }

    /// ln f(x), stable through the overflow regime (x in the natural domain,
    /// |x| used for the even families).
    pub fn ln_eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        match self.kind {
            ScaleKind::Besq { alpha } => Ok((x / alpha).ln()),
            ScaleKind::BmDrift { mu } => {
                if x >= 0.0 {
                    Ok(ln_f_mu(mu, x))
                } else {
                    Ok(f_mu(mu, x).ln())
                }
            }
            ScaleKind::ReflectedBmDrift { mu } => Ok(ln_f_mu(mu, x.abs())),
            ScaleKind::Ou { alpha } => {
                let u = x.abs();
                if alpha * u * u <= OVERFLOW_EXPONENT {
                    Ok(self.eval(x)?.ln())
                } else {
                    // f(u) = 2 e^{α u²} ∫_0^W e^{-α w (2u - w)} I(u - w) dw + tail
                    let w_max = (u / 2.0).min(80.0 / (2.0 * alpha * u) * 1.2);
                    let inner = |w: f64| {
                        let uu = u - w;
                        (-alpha * w * (2.0 * u - w)).exp() * ou_inner(alpha, uu)
                    };
                    let j = integrate(&inner, 0.0, w_max, REL_TOL, 1e-300);
                    Ok(alpha * u * u + (2.0 * j.value).ln())
                }
            }
            ScaleKind::Cir { a, b, c } => {
                let (theta, kappa) = cir_exponents(a, b, c);
                if -kappa * x <= OVERFLOW_EXPONENT {
                    Ok(self.eval(x)?.ln())
                } else {
                    let w_max = 80.0 / (-kappa);
                    let inner = |w: f64| {
                        let t = x - w;
                        (kappa * w).exp() * t.powf(-theta) * cir_inner(theta, kappa, t)
                    };
                    let j = integrate(&inner, 0.0, w_max, REL_TOL, 1e-300);
                    Ok((2.0 / (c * c)).ln() - kappa * x + j.value.ln())
                }
            }
        }
    }

    /// f'(x).
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self.kind {
            ScaleKind::Besq { alpha } => 1.0 / alpha,
            ScaleKind::BmDrift { mu } => f_mu_prime(mu, x),
            ScaleKind::ReflectedBmDrift { mu } => sign0(x) * f_mu_prime(mu, x.abs()),
            ScaleKind::Ou { alpha } => ou_integrand(alpha, x),
            ScaleKind::Cir { a, b, c } => {
                let (theta, kappa) = cir_exponents(a, b, c);
                2.0 / (c * c) * cir_outer_integrand(theta, kappa, x)
            }
        })
    }

    /// f(x1) - f(x0), evaluated as the integral of f' over [x0, x1] so the
    /// difference carries the accuracy of the small interval rather than the
    /// cancellation of two large values.
    pub fn delta(&self, x0: f64, x1: f64) -> Result<f64> {
        self.check_domain(x0)?;
        self.check_domain(x1)?;
        Ok(match self.kind {
            ScaleKind::Besq { alpha } => (x1 - x0) / alpha,
            _ => {
                let q = integrate(
                    &|u| self.derivative(u).expect("interior point"),
                    x0,
                    x1,
                    1e-13,
                    1e-300,
                );
                q.value
            }
        })
    }

    /// Evenness flag (f(-x) = f(x)).
    pub fn is_even(&self) -> bool {
        matches!(
            self.kind,
            ScaleKind::Ou { .. } | ScaleKind::ReflectedBmDrift { .. }
        )
    }
}

fn cir_exponents(a: f64, b: f64, c: f64) -> (f64, f64) {
    (2.0 * a / (c * c), 2.0 * b / (c * c))
}

/// I(u) = ∫_0^u e^{-α v²} dv, odd in u.
fn ou_inner(alpha: f64, u: f64) -> f64 {
    let s = sign0(u);
    let u = u.abs();
    if u == 0.0 {
        return 0.0;
    }
    // integrand is negligible past v² > 40/α
    let cut = (40.0 / alpha).sqrt().min(u);
    s * integrate(&|v| (-alpha * v * v).exp(), 0.0, cut, 1e-13, 1e-300).value
}

/// f'(u) = 2 e^{α u²} I(u); odd in u.
fn ou_integrand(alpha: f64, u: f64) -> f64 {
    2.0 * (alpha * u * u).exp() * ou_inner(alpha, u)
}

/// inner(t) = ∫_0^t s^{θ-1} e^{κs} ds for κ < 0, via the series on [0, s0]
/// and quadrature on the decaying remainder.
fn cir_inner(theta: f64, kappa: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s0 = t.min(0.5 / (-kappa));
    let series = s0.powf(theta) * cir_series(theta, kappa * s0);
    if s0 >= t {
        return series;
    }
    // tail beyond 120/|κ| is below e^{-60} of the total
    let t_eff = t.min(s0 + 120.0 / (-kappa));
    let q = integrate(
        &|s| s.powf(theta - 1.0) * (kappa * s).exp(),
        s0,
        t_eff,
        1e-13,
        1e-300,
    );
    series + q.value
}

/// S(z-argument) = Σ_{k>=0} z^k / (k! (θ+k)) with z = κ s0, |z| <= 1/2.
fn cir_series(theta: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0 / theta;
    for k in 1..40 {
        term *= z / k as f64;
        let add = term / (theta + k as f64);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// outer integrand t^{-θ} e^{-κt} inner(t); near 0 the t^{±θ} factors are
/// cancelled analytically through the series.
fn cir_outer_integrand(theta: f64, kappa: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0 / theta; // continuous limit
    }
    if t <= 0.5 / (-kappa) {
        (-kappa * t).exp() * cir_series(theta, kappa * t)
    } else {
        t.powf(-theta) * (-kappa * t).exp() * cir_inner(theta, kappa, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn besq_linear() {
        let f = Scale::new(ScaleKind::Besq { alpha: 4.0 });
        assert_relative_eq!(f.eval(2.0).unwrap(), 0.5);
        assert_relative_eq!(f.derivative(1.0).unwrap(), 0.25);
    }

    #[test]
    fn bm_drift_closed_form_points() {
        let f = Scale::new(ScaleKind::BmDrift { mu: 1.0 });
        // f(1) = (e^2 - 3)/2, f(-1) = (e^{-2} + 1)/2
        assert_relative_eq!(f.eval(1.0).unwrap(), 2.194528049465325, epsilon = 1e-13);
        assert_relative_eq!(f.eval(-1.0).unwrap(), 0.5676676416183064, epsilon = 1e-13);
        assert!(f.eval(1.0).unwrap() > f.eval(-1.0).unwrap());
    }

    #[test]
    fn ou_quadrature_matches_reference() {
        // 2 ∫_0^x e^{u²} ∫_0^u e^{-v²} dv du at x = 0.5, alpha = 1
        let f = Scale::new(ScaleKind::Ou { alpha: 1.0 });
        let e = f.eval_with_error(0.5).unwrap();
        assert_relative_eq!(e.value, 0.2723000633761121, epsilon = 1e-11);
        assert!(e.error < 1e-9);
        // below the closed-form bracket (e^{0.25} - 1)
        assert!(e.value > 0.0 && e.value < 0.2840254166877415);
        // alpha = 2 spot value
        let f2 = Scale::new(ScaleKind::Ou { alpha: 2.0 });
        assert_relative_eq!(f2.eval(1.0).unwrap(), 2.2508012081145373, epsilon = 1e-10);
    }

    #[test]
    fn cir_quadrature_matches_reference() {
        let f = Scale::new(ScaleKind::Cir {
            a: 1.0,
            b: -1.0,
            c: 2.0,
        });
        assert_relative_eq!(f.eval(1.0).unwrap(), 1.1914986370255153, epsilon = 1e-10);
        let g = Scale::new(ScaleKind::Cir {
            a: 2.0,
            b: -0.5,
            c: 1.0,
        });
        assert_relative_eq!(g.eval(2.0).unwrap(), 1.2562974898861902, epsilon = 1e-10);
    }

    #[test]
    fn evenness_and_asymmetry() {
        let ou = Scale::new(ScaleKind::Ou { alpha: 1.5 });
        for &x in &[0.3, 1.0, 2.2] {
            let (p, m) = (ou.eval(x).unwrap(), ou.eval(-x).unwrap());
            assert!((p - m).abs() <= 1e-12 * (1.0 + p), "OU even: {p} vs {m}");
        }
        let refl = Scale::new(ScaleKind::ReflectedBmDrift { mu: 0.7 });
        assert_relative_eq!(
            refl.eval(-1.3).unwrap(),
            refl.eval(1.3).unwrap(),
            epsilon = 1e-14
        );
        let bm = Scale::new(ScaleKind::BmDrift { mu: 0.7 });
        for &x in &[0.5, 1.0, 3.0] {
            assert!(bm.eval(x).unwrap() > bm.eval(-x).unwrap());
        }
    }

    #[test]
    fn sub_homogeneity_of_f_mu() {
        // f_mu(δλ) < δ f_mu(λ)
        let f = Scale::new(ScaleKind::BmDrift { mu: 1.0 });
        for &lam in &[0.1, 1.0, 10.0] {
            for &del in &[0.1, 0.5, 0.9] {
                assert!(f.eval(del * lam).unwrap() < del * f.eval(lam).unwrap());
            }
        }
    }

    #[test]
    fn ln_eval_continuous_across_overflow_switch() {
        let f = Scale::new(ScaleKind::Ou { alpha: 1.0 });
        // just below the switch: direct ln(f); just above: Laplace window
        let below = f.ln_eval(24.4).unwrap(); // 24.4² = 595.4
        let above = f.ln_eval(24.6).unwrap(); // 24.6² = 605.2
                                              // ln f grows like α x²; the jump should match that slope
        let slope = (above - below) / (24.6 - 24.4);
        assert_relative_eq!(slope, 2.0 * 24.5, max_relative = 1e-2);

        let g = Scale::new(ScaleKind::Cir {
            a: 1.0,
            b: -1.0,
            c: 1.0,
        });
        // kappa = -2: switch at x = 300
        let lo = g.ln_eval(295.0).unwrap();
        let hi = g.ln_eval(305.0).unwrap();
        assert_relative_eq!((hi - lo) / 10.0, 2.0, max_relative = 1e-2);
    }

    #[test]
    fn delta_matches_direct_difference() {
        let f = Scale::new(ScaleKind::Ou { alpha: 1.0 });
        let d = f.delta(0.5, 1.5).unwrap();
        let direct = f.eval(1.5).unwrap() - f.eval(0.5).unwrap();
        assert_relative_eq!(d, direct, max_relative = 1e-10);
    }

    #[test]
    fn monotone_on_positive_axis() {
        for kind in [
            ScaleKind::Ou { alpha: 1.0 },
            ScaleKind::BmDrift { mu: 1.0 },
            ScaleKind::ReflectedBmDrift { mu: 1.0 },
            ScaleKind::Besq { alpha: 2.0 },
            ScaleKind::Cir {
                a: 1.0,
                b: -1.0,
                c: 2.0,
            },
        ] {
            let f = Scale::new(kind);
            let mut prev = 0.0;
            for i in 1..=20 {
                let x = 0.25 * i as f64;
                let v = f.eval(x).unwrap();
                assert!(v > prev, "{kind:?} not increasing at {x}");
                prev = v;
            }
        }
    }
}
