//! Exact transition samplers.
//!
//! Squared Bessel transitions use the noncentral chi-square law sampled as a
//! Poisson mixture of gammas (no special-function inversion). The CIR
//! transition is the deterministic time change of a squared Bessel draw, and
//! the Bessel / radial families are square roots of those. The reflected
//! drifted family has no exact transition and routes to the Euler step,
//! flagged as such.

use crate::engine::euler::euler_step;
use crate::error::{Error, Result};
use crate::process::{Family, State};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Exact,
    EulerFallback,
}

#[derive(Clone, Copy, Debug)]
pub struct Transition {
    pub state: State,
    pub law: Law,
}

/// One draw from the transition law of `family` over `dt` starting at `x`.
pub fn sample_transition<R: Rng>(
    family: Family,
    x: State,
    dt: f64,
    rng: &mut R,
) -> Result<Transition> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::domain(
            "sample_transition",
            format!("dt must be > 0, got {dt}"),
        ));
    }
    let exact = |state| Transition {
        state,
        law: Law::Exact,
    };
    match family {
        Family::Ou { alpha } => {
            let x = x.real();
            let decay = (-alpha * dt).exp();
            let var = -(-2.0 * alpha * dt).exp_m1() / (2.0 * alpha);
            let z: f64 = StdNormal.sample(rng);
            Ok(exact(State::Real(x * decay + var.sqrt() * z)))
        }
        Family::BmDrift { mu } => {
            let x = x.real();
            let z: f64 = StdNormal.sample(rng);
            Ok(exact(State::Real(x - mu * dt + dt.sqrt() * z)))
        }
        Family::Besq { alpha } => {
            let x = x.real();
            check_nonneg("besq", x)?;
            Ok(exact(State::Real(besq_transition(alpha, x, dt, rng))))
        }
        Family::Cir { a, b, c } => {
            let x = x.real();
            check_nonneg("cir", x)?;
            Ok(exact(State::Real(cir_transition(a, b, c, x, dt, rng))))
        }
        Family::Bessel { alpha } => {
            let u = x.real();
            check_nonneg("bessel", u)?;
            Ok(exact(State::Real(
                besq_transition(alpha, u * u, dt, rng).sqrt(),
            )))
        }
        Family::RadialOu { alpha, beta } => {
            let r = x.real();
            check_nonneg("radial_ou", r)?;
            let y = cir_transition(alpha, -2.0 * beta, 2.0, r * r, dt, rng);
            Ok(exact(State::Real(y.sqrt())))
        }
        Family::ComplexOu { a, b } => {
            let (re, im) = match x {
                State::Complex(re, im) => (re, im),
                State::Real(_) => {
                    return Err(Error::domain("sample_transition", "complex state required"))
                }
            };
            let decay = (-a * dt).exp();
            let (sin, cos) = (b * dt).sin_cos();
            // exp(-(a+ib) dt) z, then isotropic Gaussian noise
            let mre = decay * (cos * re + sin * im);
            let mim = decay * (-sin * re + cos * im);
            let sd = (-(-2.0 * a * dt).exp_m1() / (2.0 * a)).sqrt();
            let z1: f64 = StdNormal.sample(rng);
            let z2: f64 = StdNormal.sample(rng);
            Ok(exact(State::Complex(mre + sd * z1, mim + sd * z2)))
        }
        Family::ComplexBm => {
            let (re, im) = match x {
                State::Complex(re, im) => (re, im),
                State::Real(_) => {
                    return Err(Error::domain("sample_transition", "complex state required"))
                }
            };
            let sd = dt.sqrt();
            let z1: f64 = StdNormal.sample(rng);
            let z2: f64 = StdNormal.sample(rng);
            Ok(exact(State::Complex(re + sd * z1, im + sd * z2)))
        }
        Family::ReflectedBmDrift { .. } => {
            // sign-drift SDE: no exact transition here, never a silent wrong law
            Ok(Transition {
                state: euler_step(family, x, dt, rng),
                law: Law::EulerFallback,
            })
        }
    }
}

fn check_nonneg(what: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "sample_transition",
            format!("{what} state must be >= 0, got {x}"),
        ))
    }
}

/// Standard normal without per-call parameter checks.
struct StdNormal;

impl Distribution<f64> for StdNormal {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rand_distr::StandardNormal.sample(rng)
    }
}

/// BESQ(alpha) value at `t` started from `x >= 0`.
///
/// From 0 the law is Gamma(alpha/2, 2t); from x > 0 it is noncentral
/// chi-square: K ~ Poisson(x / (2t)), then Gamma(alpha/2 + K, 2t).
pub fn besq_transition<R: Rng>(alpha: f64, x: f64, t: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && x >= 0.0 && t > 0.0);
    let lambda = x / (2.0 * t);
    let k: f64 = if lambda > 0.0 {
        Poisson::new(lambda).expect("poisson rate").sample(rng)
    } else {
        0.0
    };
    let shape = alpha / 2.0 + k;
    Gamma::new(shape, 2.0 * t)
        .expect("gamma shape/scale")
        .sample(rng)
}

/// CIR(a, b, c) value at `t` started from `x >= 0`, via the time change of a
/// BESQ(4a/c^2) draw.
pub fn cir_transition<R: Rng>(a: f64, b: f64, c: f64, x: f64, t: f64, rng: &mut R) -> f64 {
    debug_assert!(a > 0.0 && b < 0.0 && c > 0.0);
    let alpha = 4.0 * a / (c * c);
    // rho(t) = c^2 (1 - e^{-bt}) / (4b) > 0 for b < 0
    let rho = c * c * (-(-b * t).exp_m1()) / (4.0 * b);
    debug_assert!(rho > 0.0);
    (b * t).exp() * besq_transition(alpha, x, rho, rng)
}
