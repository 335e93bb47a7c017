//! Two-sided envelope check: the per-time ratio r(t) = E F(X*_t) / F(g(t))
//! must stay inside a bounded band over a wide time window (spread <= frozen
//! limit, min ratio above a floor), with a hitting-rule spot check at three
//! levels as a stopping-time proxy.

use crate::analytic::{Growth, GrowthKind};
use crate::error::Result;
use crate::moderate::ModerateFn;
use crate::montecarlo::{
    hitting_data, ratio_envelope, HitRun, Observable, RatioEnvelope, StepPolicy,
};
use crate::process::{Family, ProcessSpec};
use crate::rng::Streams;
use crate::verify::thresholds::{CENSOR_LIMIT, HITTING_BAND_SLACK, MIN_RATIO_FLOOR};
use crate::verify::{wdata, CheckReport, Table};

#[derive(Clone, Debug)]
pub struct TwoSidedConfig {
    pub t_grid: Vec<f64>,
    pub n_paths: usize,
    pub z: f64,
    pub policy: StepPolicy,
    /// hitting levels for the stopping-time spot check (empty to skip)
    pub hitting_levels: Vec<f64>,
    pub hitting_cap: f64,
    pub hitting_paths: usize,
}

pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
        .collect()
}

/// Envelope observable and growth for one check target.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeForm {
    pub growth: GrowthKind,
    pub observable: Observable,
    /// label suffix distinguishing the two complex BM forms
    pub label: &'static str,
}

impl EnvelopeForm {
    pub fn standard(family: &Family) -> EnvelopeForm {
        EnvelopeForm {
            growth: Growth::for_family(family).kind(),
            observable: Observable::Modulus,
            label: "",
        }
    }

    pub fn complex_bm_normalized() -> EnvelopeForm {
        EnvelopeForm {
            growth: GrowthKind::ComplexBmNormalized,
            observable: Observable::TimeNormalizedModulus,
            label: "_normalized",
        }
    }
}

pub struct TwoSidedOutcome {
    pub report: CheckReport,
    pub envelopes: Vec<(String, RatioEnvelope)>,
}

/// Run the envelope check for one process form across a list of moderate
/// functions. `spread_limit_for` resolves the frozen limit per descriptor.
pub fn two_sided_check(
    spec: &ProcessSpec,
    form: EnvelopeForm,
    f_list: &[ModerateFn],
    cfg: &TwoSidedConfig,
    spread_limit_for: &dyn Fn(&str) -> f64,
    streams: &Streams,
) -> Result<TwoSidedOutcome> {
    let family = spec.family();
    let name = format!("{}{}", family.name(), form.label);
    let streams = streams.namespaced(&format!("two_sided/{name}"));
    let mut report = CheckReport::new(format!("two_sided.{name}"), streams.master());
    report.param("n_paths", cfg.n_paths);
    report.param("t_lo", cfg.t_grid.first().copied().unwrap_or(f64::NAN));
    report.param("t_hi", cfg.t_grid.last().copied().unwrap_or(f64::NAN));
    let growth = Growth::new(form.growth);
    report.param("growth", growth.formula());

    let mut table = Table {
        name: format!("envelope_{name}"),
        columns: vec![
            "moderate".into(),
            "t".into(),
            "ratio".into(),
            "ci_lo".into(),
            "ci_hi".into(),
            "mean_f_sup".into(),
            "se".into(),
            "f_of_g".into(),
        ],
        rows: Vec::new(),
    };

    // one set of hitting runs per level, shared across moderate functions
    let hit_runs: Vec<(f64, Vec<HitRun>)> = if form.observable == Observable::Modulus {
        cfg.hitting_levels
            .iter()
            .enumerate()
            .map(|(li, &level)| {
                hitting_data(
                    spec,
                    level,
                    cfg.hitting_cap,
                    cfg.hitting_paths,
                    &cfg.policy,
                    &streams.namespaced(&format!("hit/{li}")),
                )
                .map(|runs| (level, runs))
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut envelopes = Vec::new();
    for (fi, f) in f_list.iter().enumerate() {
        let desc = f.descriptor();
        let limit = spread_limit_for(&desc);
        let env = ratio_envelope(
            spec,
            f,
            &growth,
            form.observable,
            &cfg.t_grid,
            cfg.n_paths,
            cfg.z,
            &cfg.policy,
            &streams.namespaced(&format!("env/{fi}")),
        )?;
        for p in &env.points {
            table.rows.push(vec![
                fi as f64,
                p.t,
                p.ratio,
                p.ci_lo,
                p.ci_hi,
                p.mean_f_sup,
                p.se,
                p.f_of_g,
            ]);
        }
        report.metric(&format!("spread[{desc}]"), env.spread);
        report.metric(&format!("min_ratio[{desc}]"), env.min_ratio);
        report.metric(&format!("spread_limit[{desc}]"), limit);
        if env.spread > limit {
            report.fail_with(
                format!("spread above the frozen limit for {desc}"),
                wdata([("spread", env.spread), ("limit", limit)]),
            );
        }
        if env.min_ratio < MIN_RATIO_FLOOR {
            report.fail_with(
                format!("ratio collapses toward zero for {desc}"),
                wdata([("min_ratio", env.min_ratio), ("floor", MIN_RATIO_FLOOR)]),
            );
        }

        // stopping-time spot check at three hitting levels: the ratio of
        // means must sit inside the deterministic-time band up to slack
        {
            let band_lo = env.min_ratio / HITTING_BAND_SLACK;
            let band_hi = env.spread * env.min_ratio * HITTING_BAND_SLACK;
            for (level, runs) in &hit_runs {
                let level = *level;
                let censored =
                    runs.iter().filter(|r| r.censored).count() as f64 / runs.len() as f64;
                let fx: Vec<f64> = runs.iter().map(|r| f.eval(r.sup)).collect();
                let fg: Result<Vec<f64>> = runs
                    .iter()
                    .map(|r| Ok(f.eval(growth.eval(r.tau)?)))
                    .collect();
                let ratio = crate::stats::mean_se(&fx).mean / crate::stats::mean_se(&fg?).mean;
                report.metric(&format!("hit_ratio[{desc}][{level}]"), ratio);
                report.metric(&format!("hit_censored[{desc}][{level}]"), censored);
                if censored > CENSOR_LIMIT {
                    report.inconclusive_with(
                        format!("hitting rule under-resolved for {desc}"),
                        wdata([("level", level), ("censored_fraction", censored)]),
                    );
                    continue;
                }
                if ratio < band_lo || ratio > band_hi {
                    report.fail_with(
                        format!("hitting-rule ratio outside the envelope band for {desc}"),
                        wdata([
                            ("level", level),
                            ("ratio", ratio),
                            ("band_lo", band_lo),
                            ("band_hi", band_hi),
                        ]),
                    );
                }
            }
        }
        envelopes.push((desc, env));
    }
    report.tables.push(table);
    Ok(TwoSidedOutcome { report, envelopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moderate::{ModerateFn, ModerateKind};
    use crate::verify::Verdict;

    #[test]
    fn besq_linear_moderate_passes_with_tight_band() {
        let spec = ProcessSpec::new(Family::Besq { alpha: 1.0 }).unwrap();
        let cfg = TwoSidedConfig {
            t_grid: log_spaced(0.1, 10.0, 5),
            n_paths: 4000,
            z: 4.0,
            policy: StepPolicy {
                steps_per_unit: 256.0,
                cap_total: 1 << 14,
                ..Default::default()
            },
            hitting_levels: vec![],
            hitting_cap: 0.0,
            hitting_paths: 0,
        };
        let f = [ModerateFn::new(ModerateKind::Pow { p: 1.0 }).unwrap()];
        let out = two_sided_check(
            &spec,
            EnvelopeForm::standard(&spec.family()),
            &f,
            &cfg,
            &|_| 10.0,
            &Streams::new(5150),
        )
        .unwrap();
        assert_eq!(
            out.report.verdict,
            Verdict::Pass,
            "{:?}",
            out.report.witnesses
        );
        // ratio of E Y*_t to t stays within the known [1, 3] bracket
        for (_, env) in &out.envelopes {
            for p in &env.points {
                assert!(
                    p.ratio >= 1.0 - 0.15 && p.ratio <= 3.0,
                    "ratio {} at t {}",
                    p.ratio,
                    p.t
                );
            }
        }
    }

    #[test]
    fn wrong_growth_is_rejected() {
        // OU measured against sqrt(t): ratio drifts, spread blows past 10
        let spec = ProcessSpec::new(Family::Ou { alpha: 1.0 }).unwrap();
        let cfg = TwoSidedConfig {
            t_grid: log_spaced(1e-2, 1e4, 9),
            n_paths: 2000,
            z: 4.0,
            policy: StepPolicy {
                steps_per_unit: 512.0,
                cap_total: 1 << 14,
                ..Default::default()
            },
            hitting_levels: vec![],
            hitting_cap: 0.0,
            hitting_paths: 0,
        };
        let form = EnvelopeForm {
            growth: GrowthKind::Bessel, // sqrt(t), deliberately wrong for OU
            observable: Observable::Modulus,
            label: "_wrong_growth",
        };
        let f = [ModerateFn::new(ModerateKind::Pow { p: 1.0 }).unwrap()];
        let out = two_sided_check(&spec, form, &f, &cfg, &|_| 10.0, &Streams::new(5151)).unwrap();
        assert_eq!(out.report.verdict, Verdict::Fail);
    }
}
