//! Transition stepper with per-(family, scheme, dt) constants hoisted out
//! of the hot loop. Semantically identical to `sample_transition` /
//! `euler_step` on the same stream.

use crate::engine::euler::euler_step;
use crate::engine::exact::besq_transition;
use crate::engine::path::Scheme;
use crate::process::{Family, State};
use rand::Rng;
use rand_distr::Distribution;

#[derive(Clone, Copy, Debug)]
pub enum Stepper {
    OuExact {
        decay: f64,
        sd: f64,
    },
    BmDriftExact {
        drift: f64,
        sqdt: f64,
    },
    BesqExact {
        alpha: f64,
        dt: f64,
    },
    CirExact {
        alpha: f64,
        ebdt: f64,
        rho: f64,
    },
    BesselExact {
        alpha: f64,
        dt: f64,
    },
    RadialExact {
        alpha: f64,
        ebdt: f64,
        rho: f64,
    },
    ComplexOuExact {
        decay: f64,
        cos: f64,
        sin: f64,
        sd: f64,
    },
    ComplexBmExact {
        sqdt: f64,
    },
    Euler {
        family: Family,
        dt: f64,
    },
}

impl Stepper {
    pub fn new(family: Family, scheme: Scheme, dt: f64) -> Stepper {
        debug_assert!(dt > 0.0);
        if scheme == Scheme::Euler || matches!(family, Family::ReflectedBmDrift { .. }) {
            return Stepper::Euler { family, dt };
        }
        match family {
            Family::Ou { alpha } => Stepper::OuExact {
                decay: (-alpha * dt).exp(),
                sd: (-(-2.0 * alpha * dt).exp_m1() / (2.0 * alpha)).sqrt(),
            },
            Family::BmDrift { mu } => Stepper::BmDriftExact {
                drift: -mu * dt,
                sqdt: dt.sqrt(),
            },
            Family::Besq { alpha } => Stepper::BesqExact { alpha, dt },
            Family::Cir { a, b, c } => Stepper::CirExact {
                alpha: 4.0 * a / (c * c),
                ebdt: (b * dt).exp(),
                rho: c * c * (-(-b * dt).exp_m1()) / (4.0 * b),
            },
            Family::Bessel { alpha } => Stepper::BesselExact { alpha, dt },
            Family::RadialOu { alpha, beta } => {
                let b = -2.0 * beta;
                Stepper::RadialExact {
                    alpha,
                    ebdt: (b * dt).exp(),
                    rho: 4.0 * (-(-b * dt).exp_m1()) / (4.0 * b),
                }
            }
            Family::ComplexOu { a, b } => {
                let (sin, cos) = (b * dt).sin_cos();
                Stepper::ComplexOuExact {
                    decay: (-a * dt).exp(),
                    cos,
                    sin,
                    sd: (-(-2.0 * a * dt).exp_m1() / (2.0 * a)).sqrt(),
                }
            }
            Family::ComplexBm => Stepper::ComplexBmExact { sqdt: dt.sqrt() },
            Family::ReflectedBmDrift { .. } => unreachable!("handled above"),
        }
    }

    #[inline]
    pub fn step<R: Rng>(&self, x: State, rng: &mut R) -> State {
        match *self {
            Stepper::OuExact { decay, sd } => {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                State::Real(x.real() * decay + sd * z)
            }
            Stepper::BmDriftExact { drift, sqdt } => {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                State::Real(x.real() + drift + sqdt * z)
            }
            Stepper::BesqExact { alpha, dt } => {
                State::Real(besq_transition(alpha, x.real(), dt, rng))
            }
            Stepper::CirExact { alpha, ebdt, rho } => {
                State::Real(ebdt * besq_transition(alpha, x.real(), rho, rng))
            }
            Stepper::BesselExact { alpha, dt } => {
                let u = x.real();
                State::Real(besq_transition(alpha, u * u, dt, rng).sqrt())
            }
            Stepper::RadialExact { alpha, ebdt, rho } => {
                let r = x.real();
                State::Real((ebdt * besq_transition(alpha, r * r, rho, rng)).sqrt())
            }
            Stepper::ComplexOuExact {
                decay,
                cos,
                sin,
                sd,
            } => {
                let (re, im) = match x {
                    State::Complex(re, im) => (re, im),
                    State::Real(v) => (v, 0.0),
                };
                let z1: f64 = rand_distr::StandardNormal.sample(rng);
                let z2: f64 = rand_distr::StandardNormal.sample(rng);
                State::Complex(
                    decay * (cos * re + sin * im) + sd * z1,
                    decay * (-sin * re + cos * im) + sd * z2,
                )
            }
            Stepper::ComplexBmExact { sqdt } => {
                let (re, im) = match x {
                    State::Complex(re, im) => (re, im),
                    State::Real(v) => (v, 0.0),
                };
                let z1: f64 = rand_distr::StandardNormal.sample(rng);
                let z2: f64 = rand_distr::StandardNormal.sample(rng);
                State::Complex(re + sqdt * z1, im + sqdt * z2)
            }
            Stepper::Euler { family, dt } => euler_step(family, x, dt, rng),
        }
    }
}
