//! Discretized path generation with running maxima and hitting records.

use crate::engine::exact::besq_transition;
use crate::engine::stepper::Stepper;
use crate::error::{Error, Result};
use crate::process::{Family, ProcessSpec, State};
use rand::Rng;
use rand_distr::Distribution;

/// How to discretize time.
#[derive(Clone, Copy, Debug)]
pub enum Resolution {
    /// n uniform steps over the rule's horizon
    Steps(usize),
    /// uniform steps of size at most h
    MaxStep(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// exact transition law whenever one exists, Euler otherwise
    Auto,
    /// force Euler-Maruyama
    Euler,
}

#[derive(Clone, Copy, Debug)]
pub struct GridPolicy {
    pub resolution: Resolution,
    pub scheme: Scheme,
    /// Brownian-bridge correction of the running maximum between grid
    /// points. Only meaningful for the unit-diffusion signed families
    /// (OU, BM with drift); ignored elsewhere.
    pub bridge_correction: bool,
}

impl GridPolicy {
    pub fn steps(n: usize) -> Self {
        GridPolicy {
            resolution: Resolution::Steps(n),
            scheme: Scheme::Auto,
            bridge_correction: false,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_bridge(mut self) -> Self {
        self.bridge_correction = true;
        self
    }
}

#[derive(Clone, Copy, Debug)]
pub enum StoppingRule {
    FixedTime { t: f64 },
    HittingLevel { level: f64, cap: f64 },
    FixedTimeMinHit { t: f64, level: f64 },
}

impl StoppingRule {
    pub fn horizon(&self) -> f64 {
        match *self {
            StoppingRule::FixedTime { t } => t,
            StoppingRule::HittingLevel { cap, .. } => cap,
            StoppingRule::FixedTimeMinHit { t, .. } => t,
        }
    }

    pub fn level(&self) -> Option<f64> {
        match *self {
            StoppingRule::FixedTime { .. } => None,
            StoppingRule::HittingLevel { level, .. } => Some(level),
            StoppingRule::FixedTimeMinHit { level, .. } => Some(level),
        }
    }

    fn validate(&self) -> Result<()> {
        let t = self.horizon();
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(
                "stopping_rule",
                format!("horizon must be finite and > 0, got {t}"),
            ));
        }
        if let Some(l) = self.level() {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::domain(
                    "stopping_rule",
                    format!("level must be finite and > 0, got {l}"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HitRecord {
    /// first grid index with |value| >= level
    pub index: usize,
    /// refined hitting-time estimate (one bisection of the crossing step
    /// under Euler, midpoint of the crossing step otherwise)
    pub time: f64,
}

#[derive(Clone, Debug)]
pub struct PathSkeleton {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub running_max: Vec<f64>,
    pub hit: Option<HitRecord>,
    /// set when a hitting rule's cap bound without a hit
    pub censored: bool,
}

impl PathSkeleton {
    pub fn terminal_time(&self) -> f64 {
        *self.times.last().expect("nonempty path")
    }

    pub fn terminal_max(&self) -> f64 {
        *self.running_max.last().expect("nonempty path")
    }
}

fn step_count(resolution: Resolution, horizon: f64) -> usize {
    match resolution {
        Resolution::Steps(n) => n.max(1),
        Resolution::MaxStep(h) => (horizon / h).ceil().max(1.0) as usize,
    }
}

/// Maximum of a Brownian bridge between `a` and `b` over a step of length
/// `dt`, by inversion of the bridge maximum law.
fn bridge_max(a: f64, b: f64, dt: f64, u: f64) -> f64 {
    let d = b - a;
    0.5 * (a + b + (d * d - 2.0 * dt * u.ln()).sqrt())
}

/// Simulate one path under the rule. Exact transitions are used when the
/// scheme allows and the family has them; the skeleton stores observed
/// values (modulus for complex families) and the running maximum of their
/// absolute value.
pub fn simulate_path<R: Rng>(
    spec: &ProcessSpec,
    rule: StoppingRule,
    grid: GridPolicy,
    rng: &mut R,
) -> Result<PathSkeleton> {
    rule.validate()?;
    let horizon = rule.horizon();
    let n = step_count(grid.resolution, horizon);
    let dt = horizon / n as f64;
    let family = spec.family();
    let use_euler = grid.scheme == Scheme::Euler;
    let bridge =
        grid.bridge_correction && matches!(family, Family::Ou { .. } | Family::BmDrift { .. });

    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut running_max = Vec::with_capacity(n + 1);

    let mut state = spec.x0();
    let v0 = spec.observe(state);
    times.push(0.0);
    values.push(v0);
    running_max.push(v0.abs());

    let level = rule.level();
    let mut hit: Option<HitRecord> = None;
    let mut sup = v0.abs();
    let scheme = if use_euler {
        Scheme::Euler
    } else {
        Scheme::Auto
    };
    let stepper = Stepper::new(family, scheme, dt);

    for i in 1..=n {
        let prev = state;
        state = stepper.step(state, rng);
        let t = i as f64 * dt;
        let v = spec.observe(state);
        sup = sup.max(v.abs());
        if bridge {
            // max and min of the bridge over the step; the sup of |X| needs both
            let (a, b) = (prev.real(), state.real());
            let u1: f64 = rand_distr::Open01.sample(rng);
            let u2: f64 = rand_distr::Open01.sample(rng);
            let hi = bridge_max(a, b, dt, u1);
            let lo = -bridge_max(-a, -b, dt, u2);
            sup = sup.max(hi).max(-lo);
        }
        times.push(t);
        values.push(v);
        running_max.push(sup);

        if hit.is_none() {
            if let Some(l) = level {
                if v.abs() >= l {
                    let refined = if use_euler {
                        // one bisection of the crossing step through the
                        // Gaussian bridge midpoint, halving overshoot bias
                        let mid_mean = midpoint_mean(family, prev, state);
                        let z: f64 = rand_distr::StandardNormal.sample(rng);
                        let mid = mid_mean + 0.5 * dt.sqrt() * sigma_at(family, prev) * z;
                        if mid.abs() >= l {
                            t - 0.75 * dt
                        } else {
                            t - 0.25 * dt
                        }
                    } else {
                        t - 0.5 * dt
                    };
                    hit = Some(HitRecord {
                        index: i,
                        time: refined,
                    });
                    if !matches!(rule, StoppingRule::FixedTime { .. }) {
                        break;
                    }
                }
            }
        }
    }

    let censored = matches!(rule, StoppingRule::HittingLevel { .. }) && hit.is_none();
    Ok(PathSkeleton {
        times,
        values,
        running_max,
        hit,
        censored,
    })
}

fn midpoint_mean(family: Family, a: State, b: State) -> f64 {
    match family {
        Family::Bessel { .. } | Family::RadialOu { .. } => {
            // states are roots of the advanced squared process
            0.5 * (a.real() + b.real())
        }
        _ => match (a, b) {
            (State::Real(x), State::Real(y)) => 0.5 * (x + y),
            (State::Complex(re0, im0), State::Complex(re1, im1)) => {
                (0.5 * (re0 + re1)).hypot(0.5 * (im0 + im1))
            }
            _ => unreachable!("state kinds cannot change along a path"),
        },
    }
}

fn sigma_at(family: Family, x: State) -> f64 {
    match family {
        Family::ComplexOu { .. } | Family::ComplexBm => 1.0,
        Family::Bessel { .. } | Family::RadialOu { .. } => 1.0,
        _ => family.diffusion(x.real()),
    }
}

/// Paired draws for the additivity identity: the sum of independent
/// BESQ(alpha) and BESQ(alpha') values at t against a single
/// BESQ(alpha + alpha') value at t, all started from zero.
pub fn besq_additivity_pair<R: Rng>(
    alpha: f64,
    alpha2: f64,
    t: f64,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha2 > 0.0) {
        return Err(Error::domain(
            "besq_additivity_pair",
            "dimensions must be > 0",
        ));
    }
    if !(t > 0.0) {
        return Err(Error::domain("besq_additivity_pair", "t must be > 0"));
    }
    let sum = besq_transition(alpha, 0.0, t, rng) + besq_transition(alpha2, 0.0, t, rng);
    let direct = besq_transition(alpha + alpha2, 0.0, t, rng);
    Ok((sum, direct))
}
