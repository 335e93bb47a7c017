//! Euler-Maruyama step with full truncation for square-root diffusions:
//! drift and diffusion are evaluated at max(x, 0) while the raw state is
//! carried forward, so the chain is total on all inputs and deterministic
//! given the Gaussian draw.
//!
//! Bessel and radial OU steps advance the corresponding squared process and
//! return the root; stepping their own SDE would hit the 1/x drift
//! singularity at the origin.

use crate::process::{sign0, Family, State};
use rand::Rng;
use rand_distr::Distribution;

/// One Euler step. The Gaussian draws consumed are fixed per family
/// (one for real families, two for complex ones).
pub fn euler_step<R: Rng>(family: Family, x: State, dt: f64, rng: &mut R) -> State {
    debug_assert!(dt > 0.0);
    let sqrt_dt = dt.sqrt();
    match family {
        Family::Ou { alpha } => {
            let x = x.real();
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            State::Real(x - alpha * x * dt + sqrt_dt * z)
        }
        Family::BmDrift { mu } => {
            let x = x.real();
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            State::Real(x - mu * dt + sqrt_dt * z)
        }
        Family::ReflectedBmDrift { mu } => {
            let x = x.real();
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            State::Real(x - mu * sign0(x) * dt + sqrt_dt * z)
        }
        Family::Besq { alpha } => {
            let x = x.real();
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            State::Real(x + alpha * dt + 2.0 * x.max(0.0).sqrt() * sqrt_dt * z)
        }
        Family::Cir { a, b, c } => {
            let x = x.real();
            let xp = x.max(0.0);
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            State::Real(x + (a + b * xp) * dt + c * xp.sqrt() * sqrt_dt * z)
        }
        Family::Bessel { alpha } => {
            let u = x.real();
            let y = euler_step(Family::Besq { alpha }, State::Real(u * u), dt, rng);
            State::Real(y.real().max(0.0).sqrt())
        }
        Family::RadialOu { alpha, beta } => {
            let r = x.real();
            let y = euler_step(
                Family::Cir {
                    a: alpha,
                    b: -2.0 * beta,
                    c: 2.0,
                },
                State::Real(r * r),
                dt,
                rng,
            );
            State::Real(y.real().max(0.0).sqrt())
        }
        Family::ComplexOu { a, b } => {
            let (re, im) = match x {
                State::Complex(re, im) => (re, im),
                State::Real(v) => (v, 0.0),
            };
            let z1: f64 = rand_distr::StandardNormal.sample(rng);
            let z2: f64 = rand_distr::StandardNormal.sample(rng);
            State::Complex(
                re + (-a * re + b * im) * dt + sqrt_dt * z1,
                im + (-b * re - a * im) * dt + sqrt_dt * z2,
            )
        }
        Family::ComplexBm => {
            let (re, im) = match x {
                State::Complex(re, im) => (re, im),
                State::Real(v) => (v, 0.0),
            };
            let z1: f64 = rand_distr::StandardNormal.sample(rng);
            let z2: f64 = rand_distr::StandardNormal.sample(rng);
            State::Complex(re + sqrt_dt * z1, im + sqrt_dt * z2)
        }
    }
}
