//! Monte Carlo estimators over parallel deterministic path streams.
//!
//! Paths are generated in parallel (one ChaCha substream per path index),
//! collected in index order, and reduced sequentially, so every estimate is
//! bit-identical for any worker count.

use crate::analytic::Growth;
use crate::engine::{sample_transition, Scheme, Stepper};
use crate::error::{Error, Result};
use crate::moderate::ModerateFn;
use crate::process::{Family, ProcessSpec};
use crate::rng::Streams;
use crate::stats::{mean_se, sum, wilson_ci};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Discretization policy for checkpointed runs: a target step density per
/// unit time, capped in total per path, with a floor per segment.
#[derive(Clone, Copy, Debug)]
pub struct StepPolicy {
    pub steps_per_unit: f64,
    pub cap_total: usize,
    pub min_per_segment: usize,
    pub scheme: Scheme,
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy {
            steps_per_unit: 4096.0, // 2^12 steps per unit time
            cap_total: 1 << 17,
            min_per_segment: 64,
            scheme: Scheme::Auto,
        }
    }
}

impl StepPolicy {
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap_total = cap;
        self
    }

    /// Per-segment step counts for a checkpoint grid starting at 0.
    fn segment_steps(&self, times: &[f64]) -> Vec<usize> {
        let mut raw: Vec<f64> = Vec::with_capacity(times.len());
        let mut prev = 0.0;
        for &t in times {
            raw.push(((t - prev) * self.steps_per_unit).ceil().max(1.0));
            prev = t;
        }
        let total: f64 = raw.iter().sum();
        let scale = if total > self.cap_total as f64 {
            self.cap_total as f64 / total
        } else {
            1.0
        };
        raw.iter()
            .map(|&r| ((r * scale).round() as usize).max(self.min_per_segment))
            .collect()
    }
}

/// Running max of the observed value at each checkpoint, single pass.
/// `normalized` additionally tracks sup of |value| / sqrt(1 + t) (complex
/// Brownian observable); it is returned second.
fn sup_at_checkpoints(
    spec: &ProcessSpec,
    times: &[f64],
    policy: &StepPolicy,
    rng: &mut ChaCha8Rng,
    normalized: bool,
) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let family = spec.family();
    let steps = policy.segment_steps(times);
    let mut state = spec.x0();
    let mut sup = spec.observe(state).abs();
    let mut sup_norm = sup; // at t = 0: |x| / 1
    let mut out = Vec::with_capacity(times.len());
    let mut out_norm = Vec::with_capacity(times.len());
    let mut t_prev = 0.0;
    let mut terminal = spec.observe(state);
    for (seg, &t) in times.iter().enumerate() {
        let n = steps[seg];
        let dt = (t - t_prev) / n as f64;
        if dt > 0.0 {
            let stepper = Stepper::new(family, policy.scheme, dt);
            for k in 1..=n {
                state = stepper.step(state, rng);
                let v = spec.observe(state);
                sup = sup.max(v.abs());
                if normalized {
                    let tk = t_prev + dt * k as f64;
                    sup_norm = sup_norm.max(v.abs() / (1.0 + tk).sqrt());
                }
                terminal = v;
            }
        }
        t_prev = t;
        out.push(sup);
        out_norm.push(sup_norm);
    }
    Ok((out, out_norm, terminal))
}

/// Parallel map over path indices, collected in index order.
fn par_paths<T: Send, F>(n_paths: usize, streams: &Streams, f: F) -> Result<Vec<T>>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.path(i);
            f(i, &mut rng)
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct MaximalEstimate {
    pub n_paths: usize,
    /// mean of F(X*_tau)
    pub mean: f64,
    pub se: f64,
    /// total steps used per path
    pub grid_steps: usize,
    /// |estimate(n) - estimate(2n)| from a 10% pilot, Euler runs only
    pub refinement_delta: Option<f64>,
    /// fraction of hitting-rule paths stopped by the cap
    pub censored_fraction: f64,
}

#[derive(Clone, Copy, Debug)]
pub enum SupRule {
    FixedTime { t: f64 },
    HittingLevel { level: f64, cap: f64 },
}

/// Estimate E F(X*_tau).
///
/// For fixed-time rules the estimator checkpoints at t; for hitting rules
/// paths run until |value| >= level or the cap, censored paths contributing
/// F of their running max at the cap (a conservative underestimate).
pub fn estimate_sup_expectation(
    spec: &ProcessSpec,
    f: &ModerateFn,
    rule: SupRule,
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<MaximalEstimate> {
    if n_paths < 1000 {
        return Err(Error::Estimation(format!(
            "need at least 1e3 paths, got {n_paths}"
        )));
    }
    match rule {
        SupRule::FixedTime { t } => {
            if !(t >= 0.0) {
                return Err(Error::Estimation(format!("bad time {t}")));
            }
            if t == 0.0 {
                return Ok(MaximalEstimate {
                    n_paths,
                    mean: 0.0,
                    se: 0.0,
                    grid_steps: 0,
                    refinement_delta: None,
                    censored_fraction: 0.0,
                });
            }
            let times = [t];
            let sups = par_paths(n_paths, streams, |i, rng| {
                let (s, _, _) = sup_at_checkpoints(spec, &times, policy, rng, false)?;
                check_finite(f.eval(s[0]), i)
            })?;
            let ms = mean_se(&sups);
            let refinement_delta =
                if effective_scheme(spec.family(), policy.scheme) == Scheme::Euler {
                    Some(refinement_probe(spec, f, t, n_paths / 10, policy, streams)?)
                } else {
                    None
                };
            Ok(MaximalEstimate {
                n_paths,
                mean: ms.mean,
                se: ms.se,
                grid_steps: policy.segment_steps(&times)[0],
                refinement_delta,
                censored_fraction: 0.0,
            })
        }
        SupRule::HittingLevel { level, cap } => {
            let runs = hitting_sups(spec, level, cap, n_paths, policy, streams)?;
            let censored = runs.iter().filter(|r| r.censored).count();
            let vals: Result<Vec<f64>> = runs
                .iter()
                .enumerate()
                .map(|(i, r)| check_finite(f.eval(r.sup), i as u64))
                .collect();
            let ms = mean_se(&vals?);
            Ok(MaximalEstimate {
                n_paths,
                mean: ms.mean,
                se: ms.se,
                grid_steps: (cap * policy.steps_per_unit) as usize,
                refinement_delta: None,
                censored_fraction: censored as f64 / n_paths as f64,
            })
        }
    }
}

fn check_finite(v: f64, path: u64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Estimation(format!(
            "non-finite F value on path {path}"
        )))
    }
}

/// Scheme that actually runs for a family under a policy.
pub fn effective_scheme(family: Family, scheme: Scheme) -> Scheme {
    match scheme {
        Scheme::Euler => Scheme::Euler,
        Scheme::Auto => {
            if matches!(family, Family::ReflectedBmDrift { .. }) {
                Scheme::Euler
            } else {
                Scheme::Auto
            }
        }
    }
}

/// |mean(n steps) - mean(2n steps)| on a pilot subset with its own streams.
fn refinement_probe(
    spec: &ProcessSpec,
    f: &ModerateFn,
    t: f64,
    pilot: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<f64> {
    let pilot = pilot.max(256);
    let run = |p: StepPolicy, ns: &Streams| -> Result<f64> {
        let times = [t];
        let sups = par_paths(pilot, ns, |_, rng| {
            let (s, _, _) = sup_at_checkpoints(spec, &times, &p, rng, false)?;
            Ok(f.eval(s[0]))
        })?;
        Ok(sum(&sups) / pilot as f64)
    };
    let coarse = run(*policy, &streams.namespaced("refine-coarse"))?;
    let mut fine_policy = *policy;
    fine_policy.steps_per_unit *= 2.0;
    fine_policy.cap_total *= 2;
    let fine = run(fine_policy, &streams.namespaced("refine-fine"))?;
    Ok((coarse - fine).abs())
}

pub struct HitRun {
    pub sup: f64,
    pub tau: f64,
    pub censored: bool,
}

/// Hitting-rule paths: run to |value| >= level or cap, return the running
/// max, the (refined) hitting time, and the censoring flag.
fn hitting_sups(
    spec: &ProcessSpec,
    level: f64,
    cap: f64,
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<Vec<HitRun>> {
    let family = spec.family();
    let n_steps = ((cap * policy.steps_per_unit) as usize)
        .min(policy.cap_total)
        .max(16);
    let dt = cap / n_steps as f64;
    let stepper = Stepper::new(family, policy.scheme, dt);
    par_paths(n_paths, streams, |_, rng| {
        let mut state = spec.x0();
        let mut sup = spec.observe(state).abs();
        for k in 1..=n_steps {
            state = stepper.step(state, rng);
            let v = spec.observe(state).abs();
            sup = sup.max(v);
            if v >= level {
                return Ok(HitRun {
                    sup,
                    tau: (k as f64 - 0.5) * dt,
                    censored: false,
                });
            }
        }
        Ok(HitRun {
            sup,
            tau: cap,
            censored: true,
        })
    })
}

/// Hitting runs exposed for checks that reuse one simulation across
/// several moderate functions.
pub fn hitting_data(
    spec: &ProcessSpec,
    level: f64,
    cap: f64,
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<Vec<HitRun>> {
    hitting_sups(spec, level, cap, n_paths, policy, streams)
}

/// Paired (g(tau), X*_tau) samples under the stopped rule tau = cap ^ tau_level
/// (both outcomes are valid stopping times; nothing is censored).
pub fn min_hit_pairs(
    spec: &ProcessSpec,
    growth: &Growth,
    level: f64,
    t_cap: f64,
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let runs = hitting_sups(spec, level, t_cap, n_paths, policy, streams)?;
    let mut g_tau = Vec::with_capacity(n_paths);
    let mut sups = Vec::with_capacity(n_paths);
    for r in &runs {
        g_tau.push(growth.eval(r.tau)?);
        sups.push(r.sup);
    }
    Ok((g_tau, sups))
}

#[derive(Clone, Copy, Debug)]
pub struct TailEstimate {
    pub p_hat: f64,
    pub successes: u64,
    pub n: u64,
    pub ci: (f64, f64),
}

/// P_{x0}(X*_t >= level) with a Wilson interval at `z` standard deviations.
pub fn estimate_tail(
    spec: &ProcessSpec,
    t: f64,
    level: f64,
    n_paths: usize,
    z: f64,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<TailEstimate> {
    if !(level > 0.0) {
        return Err(Error::Estimation(format!("level must be > 0, got {level}")));
    }
    let times = [t];
    let hits = par_paths(n_paths, streams, |_, rng| {
        let (s, _, _) = sup_at_checkpoints(spec, &times, policy, rng, false)?;
        Ok(u64::from(s[0] >= level))
    })?;
    let successes: u64 = hits.iter().sum();
    Ok(TailEstimate {
        p_hat: successes as f64 / n_paths as f64,
        successes,
        n: n_paths as u64,
        ci: wilson_ci(successes, n_paths as u64, z),
    })
}

/// Tail estimates at several (t, level) cells from one shared set of paths
/// (checkpointing the running max at each t).
pub fn tail_grid(
    spec: &ProcessSpec,
    times: &[f64],
    levels: &[f64],
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<Vec<Vec<u64>>> {
    let sups = par_paths(n_paths, streams, |_, rng| {
        let (s, _, _) = sup_at_checkpoints(spec, times, policy, rng, false)?;
        Ok(s)
    })?;
    let mut counts = vec![vec![0u64; levels.len()]; times.len()];
    for s in &sups {
        for (ti, &sv) in s.iter().enumerate() {
            for (li, &lv) in levels.iter().enumerate() {
                if sv >= lv {
                    counts[ti][li] += 1;
                }
            }
        }
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug)]
pub struct EnvelopePoint {
    pub t: f64,
    pub ratio: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_f_sup: f64,
    pub se: f64,
    pub f_of_g: f64,
}

#[derive(Clone, Debug)]
pub struct RatioEnvelope {
    pub points: Vec<EnvelopePoint>,
    pub spread: f64,
    pub min_ratio: f64,
    pub n_paths: usize,
    pub steps_per_path: usize,
}

/// Which observable the envelope tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// |X_t| (modulus for complex families)
    Modulus,
    /// |X_t| / sqrt(1 + t), for complex Brownian motion
    TimeNormalizedModulus,
}

/// Per-point ratios r(t) = E F(X*_t) / F(g(t)) with delta-method intervals
/// on the log ratio (z standard deviations), sharing one set of paths
/// across the whole grid.
pub fn ratio_envelope(
    spec: &ProcessSpec,
    f: &ModerateFn,
    growth: &Growth,
    observable: Observable,
    t_grid: &[f64],
    n_paths: usize,
    z: f64,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<RatioEnvelope> {
    if t_grid.is_empty() || t_grid[0] <= 0.0 {
        return Err(Error::Estimation(
            "t grid must start above 0 (F(g(0)) = 0)".into(),
        ));
    }
    if observable == Observable::TimeNormalizedModulus && spec.family() != Family::ComplexBm {
        return Err(Error::Estimation(
            "time-normalized observable is defined for complex Brownian motion".into(),
        ));
    }
    let normalized = observable == Observable::TimeNormalizedModulus;
    let rows = par_paths(n_paths, streams, |i, rng| {
        let (sups, sups_norm, _) = sup_at_checkpoints(spec, t_grid, policy, rng, normalized)?;
        let src = if normalized { &sups_norm } else { &sups };
        src.iter()
            .map(|&s| check_finite(f.eval(s), i))
            .collect::<Result<Vec<f64>>>()
    })?;
    let steps_per_path: usize = policy.segment_steps(t_grid).iter().sum();
    let mut points = Vec::with_capacity(t_grid.len());
    for (j, &t) in t_grid.iter().enumerate() {
        let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        let ms = mean_se(&col);
        let f_of_g = f.eval(growth.eval(t)?);
        if !(f_of_g > 0.0) {
            return Err(Error::Estimation(format!(
                "F(g({t})) vanishes; point excluded by precondition"
            )));
        }
        let ratio = ms.mean / f_of_g;
        // delta method on the log ratio
        let log_se = if ms.mean > 0.0 {
            ms.se / ms.mean
        } else {
            f64::INFINITY
        };
        points.push(EnvelopePoint {
            t,
            ratio,
            ci_lo: ratio * (-z * log_se).exp(),
            ci_hi: ratio * (z * log_se).exp(),
            mean_f_sup: ms.mean,
            se: ms.se,
            f_of_g,
        });
    }
    let max = points
        .iter()
        .map(|p| p.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    Ok(RatioEnvelope {
        points,
        spread: max / min,
        min_ratio: min,
        n_paths,
        steps_per_path,
    })
}

/// Terminal-value draws (single exact transition) for distribution tests.
pub fn terminal_draws(spec: &ProcessSpec, t: f64, n: usize, streams: &Streams) -> Result<Vec<f64>> {
    par_paths(n, streams, |_, rng| {
        let tr = sample_transition(spec.family(), spec.x0(), t, rng)?;
        Ok(spec.observe(tr.state))
    })
}
