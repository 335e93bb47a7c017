//! Check jobs: each selected check expands into independent jobs over the
//! configured processes, runs on the worker pool, and yields serializable
//! reports. Estimates are invariant to worker count by construction
//! (per-path substreams, ordered reduction), so scheduling is free to vary.

use crate::config::RunConfig;
use anyhow::Result;
use std::collections::BTreeMap;
use suprema::analytic::{
    bm_drift_g_sandwich, cir_f_sandwich, compute_phi, generator_residual, log_grid,
    ou_inverse_growth, Growth, GrowthKind, LambdaGrid, Scale, SLACK_TOL,
};
use suprema::engine::Scheme;
use suprema::moderate::ModerateFn;
use suprema::montecarlo::{min_hit_pairs, StepPolicy};
use suprema::stats::mean_se;
use suprema::verify::conformal::{conformal_scenario, ConformalConfig, ConformalMap};
use suprema::verify::controllability::{
    controllability_check, default_constants, ControllabilityConfig,
};
use suprema::verify::distribution::{distribution_equiv, PairSource};
use suprema::verify::good_lambda::good_lambda_check;
use suprema::verify::lp_bound::lp_bound_check;
use suprema::verify::thresholds::envelope_spread_limit;
use suprema::verify::two_sided::{two_sided_check, EnvelopeForm, TwoSidedConfig};
use suprema::verify::{wdata, CheckReport, Verdict};
use suprema::{Family, ProcessSpec, Streams};

/// Dense-path scheme: exact transitions except for the square-root
/// diffusions, whose exact transition draws (Poisson-gamma per step) are an
/// order of magnitude slower than the documented full-truncation chain.
fn dense_scheme(family: &Family) -> Scheme {
    match family {
        Family::Cir { .. }
        | Family::Besq { .. }
        | Family::Bessel { .. }
        | Family::RadialOu { .. } => Scheme::Euler,
        _ => Scheme::Auto,
    }
}

fn dense_policy(family: &Family) -> StepPolicy {
    StepPolicy {
        steps_per_unit: 4096.0,
        cap_total: 1 << 16,
        min_per_segment: 64,
        scheme: dense_scheme(family),
    }
}

/// Hitting levels for the stopping-time spot checks, scaled to each
/// family's stationary range.
fn hitting_levels(family: &Family) -> [f64; 3] {
    match family {
        Family::Ou { .. } | Family::BmDrift { .. } | Family::ReflectedBmDrift { .. } => {
            [0.8, 1.2, 1.6]
        }
        Family::Cir { .. } => [1.0, 1.5, 2.0],
        Family::Besq { .. } => [1.5, 2.5, 4.0],
        Family::Bessel { .. } => [1.0, 1.5, 2.0],
        Family::RadialOu { .. } => [1.2, 1.7, 2.2],
        Family::ComplexOu { .. } => [1.0, 1.4, 1.8],
        Family::ComplexBm => [1.0, 2.0, 3.0],
    }
}

pub struct Job {
    pub name: String,
    run: Box<dyn FnOnce() -> Result<Vec<CheckReport>> + Send>,
}

impl Job {
    fn new(
        name: impl Into<String>,
        run: impl FnOnce() -> Result<Vec<CheckReport>> + Send + 'static,
    ) -> Job {
        Job {
            name: name.into(),
            run: Box::new(run),
        }
    }

    pub fn execute(self) -> Result<Vec<CheckReport>> {
        (self.run)()
    }
}

pub fn build_jobs(cfg: &RunConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let streams = Streams::new(cfg.seed);
    let families = cfg.families();
    let moderates = cfg.moderates();
    for check in &cfg.checks {
        match check.as_str() {
            "analytic" => jobs_analytic(&mut jobs, &families, &streams),
            "phi" => jobs_phi(&mut jobs, &families, &streams),
            "sampler" => jobs_sampler(&mut jobs, &families, cfg, &streams),
            "identity" => jobs_identity(&mut jobs, &families, cfg, &streams),
            "lp" => jobs_lp(&mut jobs, &families, cfg, &streams),
            "controllability" => jobs_controllability(&mut jobs, &families, cfg, &streams),
            "envelope" => jobs_envelope(&mut jobs, &families, &moderates, cfg, &streams),
            "good_lambda" => jobs_good_lambda(&mut jobs, &families, cfg, &streams),
            "conformal" => jobs_conformal(&mut jobs, &moderates, cfg, &streams),
            other => unreachable!("validated check name {other}"),
        }
    }
    jobs
}

fn jobs_analytic(jobs: &mut Vec<Job>, families: &[Family], streams: &Streams) {
    for &family in families {
        let seed = streams.namespaced("analytic").master();
        jobs.push(Job::new(format!("analytic.{}", family.name()), move || {
            let mut report = CheckReport::new(format!("analytic.{}", family.name()), seed);
            // round trip of the envelope growth over twelve decades
            let growth = Growth::for_family(&family);
            let y_hi = 1e3f64.min(growth.inverse_ln_max_y());
            let mut worst: f64 = 0.0;
            for y in log_grid(1e-6, y_hi, 64) {
                let t = growth.inverse(y)?;
                let back = if t.is_finite() {
                    growth.eval(t)?
                } else {
                    growth.eval_ln_arg(growth.inverse_ln(y)?)
                };
                worst = worst.max((back - y).abs() / (1.0 + y));
            }
            report.metric("round_trip_worst", worst);
            if worst > 1e-10 {
                report.fail_with("round trip above tolerance", wdata([("worst", worst)]));
            }
            // scale-backed families: residual and brackets
            if let Ok(scale) = Scale::for_family(&family) {
                let grid: Vec<f64> = match family {
                    Family::Besq { .. } | Family::Cir { .. } => (0..16)
                        .map(|i| 0.15 + (3.0 - 0.15) * i as f64 / 15.0)
                        .collect(),
                    _ => (0..16)
                        .map(|i| {
                            let u = 0.25 + (1.2 - 0.25) * (i % 8) as f64 / 7.0;
                            if i < 8 {
                                -u
                            } else {
                                u
                            }
                        })
                        .collect(),
                };
                let resid = generator_residual(&family, &scale, &grid)?;
                report.metric("generator_residual", resid);
                if resid > 1e-6 {
                    report.fail_with(
                        "generator residual above tolerance",
                        wdata([("residual", resid)]),
                    );
                }
            }
            match family {
                Family::BmDrift { mu } | Family::ReflectedBmDrift { mu } => {
                    let out = bm_drift_g_sandwich(mu, &log_grid(1e-6, 1e6, 64))?;
                    report.metric("sandwich_min_slack", out.min_slack);
                    if out.min_slack < SLACK_TOL {
                        report.fail_with(
                            "growth bracket violated",
                            wdata([("slack", out.min_slack), ("x", out.worst_x)]),
                        );
                    }
                }
                Family::Cir { a, b, c } => {
                    let out = cir_f_sandwich(a, b, c, &log_grid(1e-6, 1e6, 64))?;
                    report.metric("sandwich_min_slack", out.min_slack);
                    if out.min_slack < SLACK_TOL {
                        report.fail_with(
                            "scale bracket violated",
                            wdata([("slack", out.min_slack), ("x", out.worst_x)]),
                        );
                    }
                }
                Family::Ou { alpha } => {
                    for aa in [2.0, 3.0] {
                        let out = ou_inverse_growth(alpha, aa, &log_grid(1e-3, 10.0, 32))?;
                        report.metric(&format!("inverse_growth_slack[a={aa}]"), out.min_slack);
                        if out.min_slack < SLACK_TOL {
                            report.fail_with(
                                "inverse growth violated",
                                wdata([("a", aa), ("slack", out.min_slack)]),
                            );
                        }
                    }
                }
                _ => {}
            }
            Ok(vec![report])
        }));
    }
}

fn jobs_phi(jobs: &mut Vec<Job>, families: &[Family], streams: &Streams) {
    for &family in families {
        if Scale::for_family(&family).is_err() {
            continue;
        }
        let seed = streams.namespaced("phi").master();
        jobs.push(Job::new(format!("phi.{}", family.name()), move || {
            let mut report = CheckReport::new(format!("phi.{}", family.name()), seed);
            let grid = LambdaGrid::default();
            let mut last = f64::INFINITY;
            for k in 1..=5 {
                let delta = 0.5f64.powi(k);
                let phi = compute_phi(&family, 2.0, delta, &grid)?;
                report.metric(&format!("phi[{delta}]"), phi);
                if phi >= last {
                    report.fail_with(
                        "profile not decreasing",
                        wdata([("delta", delta), ("phi", phi)]),
                    );
                }
                let bound = match family {
                    Family::Ou { alpha } => Some(alpha * delta * delta),
                    Family::BmDrift { .. } | Family::ReflectedBmDrift { .. } => Some(delta),
                    _ => None,
                };
                if let Some(b) = bound {
                    if phi > b + 1e-12 {
                        report.fail_with(
                            "analytic control exceeded",
                            wdata([("delta", delta), ("phi", phi), ("bound", b)]),
                        );
                    }
                }
                last = phi;
            }
            Ok(vec![report])
        }));
    }
}

fn jobs_sampler(jobs: &mut Vec<Job>, families: &[Family], cfg: &RunConfig, streams: &Streams) {
    let n = cfg.n_paths.max(100_000);
    for &family in families {
        if matches!(family, Family::ReflectedBmDrift { .. }) {
            continue; // no exact transition; covered by the refinement checks
        }
        let streams = streams.namespaced("sampler");
        jobs.push(Job::new(format!("sampler.{}", family.name()), move || {
            let mut report =
                CheckReport::new(format!("sampler.{}", family.name()), streams.master());
            report.param("n", n);
            let spec = ProcessSpec::new(family)?;
            for (i, t) in [0.25, 1.0, 4.0].into_iter().enumerate() {
                let draws = suprema::montecarlo::terminal_draws(
                    &spec,
                    t,
                    n,
                    &streams.namespaced(&format!("{}/{i}", family.name())),
                )?;
                let ms = mean_se(&draws);
                let expected = analytic_mean(&family, t);
                report.metric(&format!("mean[t={t}]"), ms.mean);
                report.metric(&format!("expected[t={t}]"), expected);
                if (ms.mean - expected).abs() > 4.0 * ms.se {
                    report.fail_with(
                        "sampler mean off the mean-ODE solution",
                        wdata([
                            ("t", t),
                            ("mean", ms.mean),
                            ("expected", expected),
                            ("se", ms.se),
                        ]),
                    );
                }
            }
            Ok(vec![report])
        }));
    }
}

/// Mean of the observed value started from zero (modulus for complex).
fn analytic_mean(family: &Family, t: f64) -> f64 {
    const HALF_PI_SQRT: f64 = 0.8862269254527580; // Gamma(1.5)
    const INV_PI_SQRT: f64 = 0.5641895835477563; // 1/sqrt(pi)
    const TWO_INV_PI_SQRT: f64 = 1.1283791670955126;
    let gamma_ratio = |alpha: f64| -> f64 {
        // Gamma((alpha+1)/2) / Gamma(alpha/2) for the dimensions in use
        if (alpha - 1.0).abs() < 1e-12 {
            INV_PI_SQRT
        } else if (alpha - 2.0).abs() < 1e-12 {
            HALF_PI_SQRT
        } else if (alpha - 3.0).abs() < 1e-12 {
            TWO_INV_PI_SQRT
        } else {
            f64::NAN
        }
    };
    match *family {
        Family::Ou { .. } => 0.0,
        Family::BmDrift { mu } => -mu * t,
        Family::Besq { alpha } => alpha * t,
        Family::Cir { a, b, .. } => (a / -b) * (1.0 - (b * t).exp()),
        Family::Bessel { alpha } => (2.0 * t).sqrt() * gamma_ratio(alpha),
        Family::RadialOu { alpha, beta } => {
            let rho = (2.0 * beta * t).exp_m1() / (2.0 * beta);
            (-beta * t).exp() * (2.0 * rho).sqrt() * gamma_ratio(alpha)
        }
        Family::ComplexOu { a, .. } => {
            let sigma = ((-(-2.0 * a * t).exp_m1()) / (2.0 * a)).sqrt();
            sigma * (std::f64::consts::PI / 2.0).sqrt()
        }
        Family::ComplexBm => t.sqrt() * (std::f64::consts::PI / 2.0).sqrt(),
        Family::ReflectedBmDrift { .. } => f64::NAN,
    }
}

fn jobs_identity(jobs: &mut Vec<Job>, families: &[Family], cfg: &RunConfig, streams: &Streams) {
    let n = cfg.n_paths;
    let mut sources: Vec<PairSource> = Vec::new();
    for &family in families {
        match family {
            Family::ComplexOu { a, b } => {
                sources.push(PairSource::ComplexOuModulusSquaredVsCir { a, b, t: 1.0 });
                sources.push(PairSource::TimeChangedComplexBmVsComplexOu { a, b, t: 1.0 });
            }
            Family::Cir { a, b, c } => {
                sources.push(PairSource::CirVsTimeChangedBesq {
                    a,
                    b,
                    c,
                    t: 1.0,
                    substeps: 8,
                });
            }
            Family::Besq { alpha } => {
                sources.push(PairSource::BesqAdditivity {
                    a1: alpha / 2.0,
                    a2: alpha / 2.0,
                    t: 1.0,
                });
            }
            _ => {}
        }
    }
    let streams = streams.namespaced("identity");
    for src in sources {
        jobs.push(Job::new(format!("identity.{}", src.label()), {
            let streams = streams;
            move || Ok(vec![distribution_equiv(&src, n, 0.01, &streams)?])
        }));
    }
}

fn jobs_lp(jobs: &mut Vec<Job>, families: &[Family], cfg: &RunConfig, streams: &Streams) {
    let n = cfg.n_paths;
    for &family in families {
        if let Family::Besq { alpha } = family {
            let streams = streams.namespaced("lp");
            jobs.push(Job::new(format!("lp.besq_{alpha}"), move || {
                let policy = StepPolicy {
                    scheme: Scheme::Euler,
                    cap_total: 1 << 14,
                    ..Default::default()
                };
                let mut out = Vec::new();
                for p in [0.25, 0.5] {
                    out.push(lp_bound_check(
                        alpha,
                        p,
                        &[0.5, 1.0, 4.0],
                        n,
                        &policy,
                        &streams,
                    )?);
                }
                Ok(out)
            }));
        }
    }
}

fn jobs_controllability(
    jobs: &mut Vec<Job>,
    families: &[Family],
    cfg: &RunConfig,
    streams: &Streams,
) {
    let n = (cfg.n_paths / 10).max(1000);
    for &family in families {
        let Some((beta, gamma, big_c)) = default_constants(&family) else {
            continue;
        };
        let streams = *streams;
        jobs.push(Job::new(
            format!("controllability.{}", family.name()),
            move || {
                let spec = ProcessSpec::new(family)?;
                let lambda_grid = match family {
                    Family::Besq { .. } => vec![0.5, 1.0, 2.0, 4.0],
                    _ => vec![0.25, 0.5, 0.75, 1.0],
                };
                let cfgc = ControllabilityConfig {
                    beta,
                    gamma,
                    big_c,
                    t_grid: vec![0.25, 0.5, 1.0, 2.0],
                    lambda_grid,
                    n_paths: n,
                    z: 4.0,
                    policy: StepPolicy {
                        scheme: dense_scheme(&family),
                        cap_total: 1 << 15,
                        ..Default::default()
                    },
                };
                Ok(vec![controllability_check(&spec, &cfgc, &streams)?])
            },
        ));
    }
}

fn jobs_envelope(
    jobs: &mut Vec<Job>,
    families: &[Family],
    moderates: &[ModerateFn],
    cfg: &RunConfig,
    streams: &Streams,
) {
    let times = cfg.grid.times();
    let n = cfg.n_paths;
    let overrides = cfg.thresholds.clone();
    let mut forms: Vec<(Family, EnvelopeForm, &'static str)> = families
        .iter()
        .map(|&f| (f, EnvelopeForm::standard(&f), ""))
        .collect();
    if families.iter().any(|f| matches!(f, Family::ComplexBm)) {
        forms.push((
            Family::ComplexBm,
            EnvelopeForm::complex_bm_normalized(),
            "_normalized",
        ));
    }
    for (family, form, suffix) in forms {
        let times = times.clone();
        let moderates = moderates.to_vec();
        let overrides = overrides.clone();
        let streams = *streams;
        jobs.push(Job::new(
            format!("envelope.{}{}", family.name(), suffix),
            move || {
                let spec = ProcessSpec::new(family)?;
                let key_family = if suffix.is_empty() {
                    family.name().to_string()
                } else {
                    format!("{}_normalized", family.name())
                };
                let cfg2 = TwoSidedConfig {
                    t_grid: times,
                    n_paths: n,
                    z: 4.0,
                    policy: dense_policy(&family),
                    hitting_levels: if suffix.is_empty() {
                        hitting_levels(&family).to_vec()
                    } else {
                        vec![]
                    },
                    hitting_cap: 200.0,
                    hitting_paths: 2000,
                };
                let limit_for = |desc: &str| -> f64 {
                    let key = format!("envelope.{}.{}", key_family, desc);
                    overrides
                        .get(&key)
                        .copied()
                        .unwrap_or_else(|| envelope_spread_limit(&key_family, desc))
                };
                let out = two_sided_check(&spec, form, &moderates, &cfg2, &limit_for, &streams)?;
                Ok(vec![out.report])
            },
        ));
    }
}

fn jobs_good_lambda(jobs: &mut Vec<Job>, families: &[Family], cfg: &RunConfig, streams: &Streams) {
    let n = (cfg.n_paths / 10).max(1000);
    for &family in families {
        let (pair_growth, phi): (GrowthKind, Box<dyn Fn(f64) -> f64 + Send + Sync>) = match family {
            Family::Ou { alpha } => (GrowthKind::Ou { alpha }, Box::new(move |d| alpha * d * d)),
            Family::BmDrift { mu } => (GrowthKind::BmDriftExact { mu }, Box::new(|d| d)),
            _ => continue,
        };
        let streams = streams.namespaced("good-lambda");
        jobs.push(Job::new(
            format!("good_lambda.{}", family.name()),
            move || {
                let spec = ProcessSpec::new(family)?;
                let growth = Growth::new(pair_growth);
                let policy = StepPolicy {
                    steps_per_unit: 1024.0,
                    cap_total: 1 << 15,
                    min_per_segment: 16,
                    scheme: Scheme::Auto,
                };
                let mut out = Vec::new();
                for (li, level) in [1.0, 1.5, 2.0].into_iter().enumerate() {
                    let (g_tau, sups) = min_hit_pairs(
                        &spec,
                        &growth,
                        level,
                        4.0,
                        n,
                        &policy,
                        &streams.namespaced(&format!("{}/{li}", family.name())),
                    )?;
                    let x_max = g_tau.iter().cloned().fold(f64::MIN, f64::max);
                    let lambda_grid = log_grid(x_max / 256.0, x_max * 1.01, 33);
                    let deltas: Vec<f64> = (1..=4).map(|k| 0.5f64.powi(k)).collect();
                    let res = good_lambda_check(
                        &format!("{}_l{}", family.name(), level),
                        &g_tau,
                        &sups,
                        2.0,
                        &deltas,
                        &lambda_grid,
                        Some(&*phi),
                        4.0,
                        streams.master(),
                    )?;
                    out.push(res.report);
                }
                Ok(out)
            },
        ));
    }
}

fn jobs_conformal(
    jobs: &mut Vec<Job>,
    moderates: &[ModerateFn],
    cfg: &RunConfig,
    streams: &Streams,
) {
    let n = (cfg.n_paths / 10).max(1000);
    for map in [
        ConformalMap::Identity,
        ConformalMap::Square,
        ConformalMap::ExpM1,
    ] {
        let moderates = moderates.to_vec();
        let streams = *streams;
        jobs.push(Job::new(format!("conformal.{}", map.label()), move || {
            let cfgc = ConformalConfig {
                t_list: vec![0.25, 1.0, 4.0],
                n_steps: 1 << 14,
                n_paths: n,
                z: 4.0,
            };
            Ok(vec![
                conformal_scenario(map, &moderates, &cfgc, &streams)?.report,
            ])
        }));
    }
}

/// Overall exit code from verdicts: 0 pass, 2 inconclusive, 1 any fail.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    let mut code = 0;
    for r in reports {
        match r.verdict {
            Verdict::Fail => return 1,
            Verdict::Inconclusive => code = 2,
            Verdict::Pass => {}
        }
    }
    code
}

/// Deterministic per-report summary map for the manifest.
pub fn verdict_summary(reports: &[CheckReport]) -> BTreeMap<String, String> {
    reports
        .iter()
        .map(|r| {
            (
                r.name.clone(),
                match r.verdict {
                    Verdict::Pass => "pass".to_string(),
                    Verdict::Fail => "fail".to_string(),
                    Verdict::Inconclusive => "inconclusive".to_string(),
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_rank_fail_over_inconclusive() {
        let mut pass = CheckReport::new("a", 0);
        let mut inc = CheckReport::new("b", 0);
        inc.demote(Verdict::Inconclusive);
        let mut fail = CheckReport::new("c", 0);
        fail.demote(Verdict::Fail);
        assert_eq!(exit_code(&[pass.clone()]), 0);
        assert_eq!(exit_code(&[pass.clone(), inc.clone()]), 2);
        assert_eq!(exit_code(&[inc, fail, pass.clone()]), 1);
        let _ = &mut pass;
    }
}
