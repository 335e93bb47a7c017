//! Controllability: for constants beta > 1, gamma, C > 0 the exceedance
//! probability started on the shell |x| = lambda is dominated uniformly:
//!
//!   sup_{|x|=lambda} P_x(X*_t >= beta lambda) <= C P_0(X*_t >= gamma lambda)
//!
//! checked within a joint confidence band on a (t, lambda) log grid. The paths
//! started at 0 are shared across the whole grid through checkpointed maxima.

use crate::error::Result;
use crate::montecarlo::{tail_grid, StepPolicy};
use crate::process::{Family, ProcessSpec, State};
use crate::rng::Streams;
use crate::verify::{wdata, CheckReport, Table, Verdict};

#[derive(Clone, Debug)]
pub struct ControllabilityConfig {
    pub beta: f64,
    pub gamma: f64,
    pub big_c: f64,
    pub t_grid: Vec<f64>,
    pub lambda_grid: Vec<f64>,
    pub n_paths: usize,
    /// CI multiplier for the joint band
    pub z: f64,
    pub policy: StepPolicy,
}

/// Per-family default constants established by the shell-domination
/// arguments: OU (2, 1, 1); BESQ (4, 2^{-ceil(1/alpha)}, 2^{ceil(1/alpha)});
/// reflected drifted BM (2, 1, 2).
pub fn default_constants(family: &Family) -> Option<(f64, f64, f64)> {
    match family {
        Family::Ou { .. } => Some((2.0, 1.0, 1.0)),
        Family::Besq { alpha } => {
            let k = (1.0 / alpha).ceil();
            Some((4.0, 2.0f64.powf(-k), 2.0f64.powf(k)))
        }
        Family::ReflectedBmDrift { .. } => Some((2.0, 1.0, 2.0)),
        Family::BmDrift { .. } => Some((2.0, 1.0, 1.0)),
        _ => None,
    }
}

fn start_states(family: &Family, lambda: f64) -> Vec<State> {
    if family.is_complex() {
        vec![State::Complex(lambda, 0.0)]
    } else if family.is_nonnegative() && !matches!(family, Family::ReflectedBmDrift { .. }) {
        vec![State::Real(lambda)]
    } else {
        vec![State::Real(lambda), State::Real(-lambda)]
    }
}

pub fn controllability_check(
    spec: &ProcessSpec,
    cfg: &ControllabilityConfig,
    streams: &Streams,
) -> Result<CheckReport> {
    let streams = streams.namespaced(&format!("controllability/{}", spec.family().name()));
    let mut report = CheckReport::new(
        format!("controllability.{}", spec.family().name()),
        streams.master(),
    );
    report.param("beta", cfg.beta);
    report.param("gamma", cfg.gamma);
    report.param("C", cfg.big_c);
    report.param("n_paths", cfg.n_paths);
    report.param("z", cfg.z);

    let family = spec.family();
    let n = cfg.n_paths as f64;

    // right-hand side from one shared batch started at the origin
    let rhs_levels: Vec<f64> = cfg.lambda_grid.iter().map(|l| cfg.gamma * l).collect();
    let origin = ProcessSpec::new(family)?;
    let rhs_counts = tail_grid(
        &origin,
        &cfg.t_grid,
        &rhs_levels,
        cfg.n_paths,
        &cfg.policy,
        &streams.namespaced("rhs"),
    )?;

    // left-hand side: one batch per (lambda, sign)
    let mut table = Table {
        name: "controllability".into(),
        columns: vec![
            "t".into(),
            "lambda".into(),
            "lhs".into(),
            "rhs".into(),
            "lhs_se".into(),
            "rhs_se".into(),
            "margin".into(),
        ],
        rows: Vec::new(),
    };

    let mut worst_margin = f64::NEG_INFINITY;
    let mut informative = 0usize;
    for (li, &lambda) in cfg.lambda_grid.iter().enumerate() {
        let mut lhs_counts_per_t = vec![0u64; cfg.t_grid.len()];
        for (si, x0) in start_states(&family, lambda).into_iter().enumerate() {
            let shell = ProcessSpec::with_start(family, x0)?;
            let counts = tail_grid(
                &shell,
                &cfg.t_grid,
                &[cfg.beta * lambda],
                cfg.n_paths,
                &cfg.policy,
                &streams.namespaced(&format!("lhs/{li}/{si}")),
            )?;
            for (ti, c) in counts.iter().enumerate() {
                lhs_counts_per_t[ti] = lhs_counts_per_t[ti].max(c[0]); // sup over the shell
            }
        }
        for (ti, &t) in cfg.t_grid.iter().enumerate() {
            let lhs = lhs_counts_per_t[ti] as f64 / n;
            let rhs = rhs_counts[ti][li] as f64 / n;
            let lhs_se = (lhs * (1.0 - lhs) / n).sqrt();
            let rhs_se = (rhs * (1.0 - rhs) / n).sqrt();
            // violation beyond the joint band: lhs - C rhs > z sqrt(se_l^2 + C^2 se_r^2)
            let joint_se = (lhs_se * lhs_se + cfg.big_c * cfg.big_c * rhs_se * rhs_se).sqrt();
            let margin = lhs - cfg.big_c * rhs - cfg.z * joint_se;
            table
                .rows
                .push(vec![t, lambda, lhs, rhs, lhs_se, rhs_se, margin]);
            if lhs_counts_per_t[ti] == 0 {
                continue; // vacuous: empty exceedance event on the left
            }
            if rhs_counts[ti][li] == 0 {
                // informative left tail with an unobservable right tail
                report.inconclusive_with(
                    "zero-count right tail",
                    wdata([("t", t), ("lambda", lambda), ("lhs", lhs)]),
                );
                continue;
            }
            informative += 1;
            worst_margin = worst_margin.max(margin);
            if margin > 0.0 {
                report.fail_with(
                    "domination violated beyond the joint band",
                    wdata([
                        ("t", t),
                        ("lambda", lambda),
                        ("lhs", lhs),
                        ("rhs", rhs),
                        ("margin", margin),
                    ]),
                );
            }
        }
    }
    if informative == 0 {
        report.inconclusive_with("no informative grid cells", wdata([]));
    }
    report.metric("worst_margin", worst_margin);
    report.metric("informative_cells", informative as f64);
    report.tables.push(table);
    if report.verdict == Verdict::Pass {
        report.note("no violation beyond the joint band at any grid point");
    }
    Ok(report)
}
