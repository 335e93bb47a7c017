//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line per sub-check. Master seed 20260811 throughout; every threshold is
//! pinned here or in `verify::thresholds`.
//!
//! Setting SUPREMA_PILOT=1 prints the observed envelope statistics used to
//! freeze the spread limits.

use rayon::prelude::*;
use suprema::analytic::{
    bm_drift_g_sandwich, cir_f_sandwich, compute_phi, generator_residual, log_grid,
    ou_inverse_growth, Growth, GrowthKind, LambdaGrid, Scale, SLACK_TOL,
};
use suprema::engine::{simulate_path, GridPolicy, Scheme, StoppingRule};
use suprema::moderate::{ModerateFn, ModerateKind};
use suprema::montecarlo::{min_hit_pairs, ratio_envelope, terminal_draws, Observable, StepPolicy};
use suprema::stats::{ks_critical, ks_statistic, mean_se};
use suprema::verify::conformal::{conformal_scenario, ConformalConfig, ConformalMap};
use suprema::verify::controllability::{controllability_check, ControllabilityConfig};
use suprema::verify::distribution::{distribution_equiv, PairSource};
use suprema::verify::good_lambda::good_lambda_check;
use suprema::verify::lp_bound::{lp_bound_check, lp_bound_value};
use suprema::verify::thresholds::{envelope_spread_limit, WRONG_GROWTH_SPREAD_LIMIT};
use suprema::verify::two_sided::{log_spaced, two_sided_check, EnvelopeForm, TwoSidedConfig};
use suprema::verify::Verdict;
use suprema::{Family, ProcessSpec, State, Streams};

const MASTER_SEED: u64 = 20260811;

fn passline(criterion: u32, ok: bool, what: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("criterion {criterion} {tag} {what}");
    assert!(ok, "criterion {criterion}: {what}");
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_1_analytic_suite() {
    // generator residual |Lf - 1| <= 1e-6 on 16-point interior grids; the
    // signed grids stay inside |x| <= 1.2 where the pinned step
    // h = 1e-5 (1 + |x|) keeps the e^{alpha x^2}-scale truncation term of
    // the central differences below the tolerance
    let resid_tol = 1e-6;
    let signed_grid: Vec<f64> = linspace(-1.2, -0.25, 8)
        .into_iter()
        .chain(linspace(0.25, 1.2, 8))
        .collect();
    let positive_grid = linspace(0.15, 3.0, 16);
    let mut cases: Vec<(Family, Vec<f64>)> = Vec::new();
    for alpha in [0.5, 1.0, 2.0] {
        cases.push((Family::Ou { alpha }, signed_grid.clone()));
    }
    for mu in [0.5, 1.0, 2.0] {
        cases.push((Family::BmDrift { mu }, signed_grid.clone()));
    }
    for alpha in [0.5, 1.0, 3.0] {
        cases.push((Family::Besq { alpha }, positive_grid.clone()));
    }
    for (a, b, c) in [(1.0, -1.0, 1.0), (1.0, -1.0, 2.0), (2.0, -0.5, 1.0)] {
        cases.push((Family::Cir { a, b, c }, positive_grid.clone()));
    }
    for (family, grid) in &cases {
        let scale = Scale::for_family(family).unwrap();
        let r = generator_residual(family, &scale, grid).unwrap();
        passline(
            1,
            r <= resid_tol,
            &format!("generator residual {} = {r:.3e}", family.name()),
        );
    }

    // g / g^{-1} round trip <= 1e-10 relative over 64 log-spaced points
    let kinds = [
        GrowthKind::Ou { alpha: 1.0 },
        GrowthKind::Ou { alpha: 2.0 },
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
    ];
    for kind in kinds {
        let g = Growth::new(kind);
        let y_hi = 1e3f64.min(g.inverse_ln_max_y());
        let mut worst: f64 = 0.0;
        for y in log_grid(1e-6, y_hi, 64) {
            let t = g.inverse(y).unwrap();
            let back = if t.is_finite() {
                g.eval(t).unwrap()
            } else {
                g.eval_ln_arg(g.inverse_ln(y).unwrap())
            };
            worst = worst.max((back - y).abs() / (1.0 + y));
        }
        passline(
            1,
            worst <= 1e-10,
            &format!("round trip {kind:?}: {worst:.3e}"),
        );
    }

    // sandwich brackets at 64 log-spaced points over [1e-6, 1e6]
    let grid = log_grid(1e-6, 1e6, 64);
    for mu in [0.5, 1.0, 2.0] {
        let out = bm_drift_g_sandwich(mu, &grid).unwrap();
        passline(
            1,
            out.min_slack >= SLACK_TOL,
            &format!(
                "drifted growth bracket mu={mu}: slack {:.3e}",
                out.min_slack
            ),
        );
    }
    for (a, b, c) in [(1.0, -1.0, 1.0), (1.0, -1.0, 2.0), (2.0, -0.5, 1.0)] {
        let out = cir_f_sandwich(a, b, c, &grid).unwrap();
        passline(
            1,
            out.min_slack >= SLACK_TOL,
            &format!(
                "cir scale bracket ({a},{b},{c}): slack {:.3e}",
                out.min_slack
            ),
        );
    }

    // inverse-growth property at 32 points for a in {2, 3}
    for a in [2.0, 3.0] {
        let out = ou_inverse_growth(1.0, a, &log_grid(1e-3, 10.0, 32)).unwrap();
        passline(
            1,
            out.min_slack >= SLACK_TOL,
            &format!("inverse growth a={a}: slack {:.3e}", out.min_slack),
        );
    }
}

// ---------------------------------------------------------------- 2

#[test]
fn criterion_2_phi_suite() {
    let grid = LambdaGrid::default();
    let deltas: Vec<f64> = (1..=5).map(|k| 0.5f64.powi(k)).collect();

    // monotone decreasing profiles
    for family in [
        Family::Ou { alpha: 1.0 },
        Family::BmDrift { mu: 1.0 },
        Family::Besq { alpha: 1.0 },
        Family::Cir {
            a: 1.0,
            b: -1.0,
            c: 2.0,
        },
    ] {
        let phis: Vec<f64> = deltas
            .iter()
            .map(|&d| compute_phi(&family, 2.0, d, &grid).unwrap())
            .collect();
        let monotone = phis.windows(2).all(|w| w[1] < w[0]);
        passline(
            2,
            monotone,
            &format!("phi profile decreasing for {}: {phis:?}", family.name()),
        );
    }

    // analytic bounds
    for alpha in [0.5, 1.0, 2.0] {
        let fam = Family::Ou { alpha };
        let ok = deltas
            .iter()
            .all(|&d| compute_phi(&fam, 2.0, d, &grid).unwrap() <= alpha * d * d + 1e-12);
        passline(2, ok, &format!("phi <= alpha delta^2 for ou alpha={alpha}"));
    }
    for mu in [0.5, 1.0, 2.0] {
        let fam = Family::BmDrift { mu };
        let ok = deltas
            .iter()
            .all(|&d| compute_phi(&fam, 2.0, d, &grid).unwrap() <= d + 1e-12);
        passline(2, ok, &format!("phi <= delta for bm_drift mu={mu}"));
    }
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_3_sampler_suite() {
    let n = 1_000_000usize;
    let streams = Streams::new(MASTER_SEED).namespaced("sampler");

    let mean_of = |family: Family, x0: State, t: f64, label: &str| -> (f64, f64) {
        let s = streams.namespaced(label);
        let vals: Vec<f64> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = s.path(i);
                let tr = suprema::engine::sample_transition(family, x0, t, &mut rng).unwrap();
                match tr.state {
                    State::Real(v) => v,
                    State::Complex(re, im) => re.hypot(im),
                }
            })
            .collect();
        let ms = mean_se(&vals);
        (ms.mean, ms.se)
    };

    // OU: m(t) = x e^{-alpha t}
    let ou_cases: [(f64, f64, f64); 3] = [(0.5, 1.0, 0.7), (1.0, -2.0, 1.0), (2.0, 0.5, 0.3)];
    for (i, (alpha, x, t)) in ou_cases.iter().enumerate() {
        let (m, se) = mean_of(
            Family::Ou { alpha: *alpha },
            State::Real(*x),
            *t,
            &format!("ou{i}"),
        );
        let expect = x * (-alpha * t).exp();
        passline(
            3,
            (m - expect).abs() <= 4.0 * se,
            &format!("ou mean a={alpha}: {m:.5} vs {expect:.5}"),
        );
    }
    // BESQ: m(t) = x + alpha t
    let besq_cases: [(f64, f64, f64); 3] = [(0.5, 0.0, 1.0), (1.0, 2.0, 0.5), (3.0, 1.0, 2.0)];
    for (i, (alpha, x, t)) in besq_cases.iter().enumerate() {
        let (m, se) = mean_of(
            Family::Besq { alpha: *alpha },
            State::Real(*x),
            *t,
            &format!("besq{i}"),
        );
        let expect = x + alpha * t;
        passline(
            3,
            (m - expect).abs() <= 4.0 * se,
            &format!("besq mean a={alpha}: {m:.5} vs {expect:.5}"),
        );
    }
    // CIR: m(t) = x e^{bt} + (a/-b)(1 - e^{bt})
    let cir_cases: [(f64, f64, f64, f64, f64); 3] = [
        (1.0, -1.0, 1.0, 0.0, 1.0),
        (1.0, -1.0, 2.0, 1.0, 0.5),
        (2.0, -0.5, 1.0, 0.5, 2.0),
    ];
    for (i, (a, b, c, x, t)) in cir_cases.iter().enumerate() {
        let (m, se) = mean_of(
            Family::Cir {
                a: *a,
                b: *b,
                c: *c,
            },
            State::Real(*x),
            *t,
            &format!("cir{i}"),
        );
        let expect = x * (b * t).exp() + (a / -b) * (1.0 - (b * t).exp());
        passline(
            3,
            (m - expect).abs() <= 4.0 * se,
            &format!("cir mean ({a},{b},{c}): {m:.5} vs {expect:.5}"),
        );
    }
    // complex OU modulus: Rayleigh mean
    let cou_cases: [(f64, f64, f64); 3] = [(0.5, 1.0, 1.0), (1.0, -2.0, 0.5), (2.0, 0.0, 0.25)];
    for (i, (a, b, t)) in cou_cases.iter().enumerate() {
        let (m, se) = mean_of(
            Family::ComplexOu { a: *a, b: *b },
            State::Complex(0.0, 0.0),
            *t,
            &format!("cou{i}"),
        );
        let sigma = ((-(-2.0 * a * t).exp_m1()) / (2.0 * a)).sqrt();
        let expect = sigma * (std::f64::consts::PI / 2.0).sqrt();
        passline(
            3,
            (m - expect).abs() <= 4.0 * se,
            &format!("complex_ou mean a={a}: {m:.5} vs {expect:.5}"),
        );
    }

    // exact vs Euler terminal marginals at T = 1, 2^12 steps, n = 1e5
    for family in [Family::Ou { alpha: 1.0 }, Family::Besq { alpha: 2.0 }] {
        let spec = ProcessSpec::new(family).unwrap();
        let n = 100_000;
        let exact = terminal_draws(&spec, 1.0, n, &streams.namespaced("ks-exact")).unwrap();
        let se = streams.namespaced("ks-euler");
        let euler: Vec<f64> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = se.path(i);
                *simulate_path(
                    &spec,
                    StoppingRule::FixedTime { t: 1.0 },
                    GridPolicy::steps(1 << 12).with_scheme(Scheme::Euler),
                    &mut rng,
                )
                .unwrap()
                .values
                .last()
                .unwrap()
            })
            .collect();
        let d = ks_statistic(&exact, &euler);
        let crit = ks_critical(n, n, 0.01);
        passline(
            3,
            d < crit,
            &format!("exact vs euler KS {}: {d:.5} < {crit:.5}", family.name()),
        );
    }
}

// ---------------------------------------------------------------- 4

#[test]
fn criterion_4_identity_suite() {
    let n = 100_000;
    let streams = Streams::new(MASTER_SEED).namespaced("identity");
    let mut sources: Vec<PairSource> = Vec::new();
    for a in [0.5, 1.0] {
        for t in [0.5, 2.0] {
            sources.push(PairSource::ComplexOuModulusSquaredVsCir { a, b: 0.5, t });
        }
    }
    sources.push(PairSource::CirVsTimeChangedBesq {
        a: 1.0,
        b: -1.0,
        c: 2.0,
        t: 1.0,
        substeps: 8,
    });
    sources.push(PairSource::BesqAdditivity {
        a1: 1.0,
        a2: 1.0,
        t: 1.0,
    });
    sources.push(PairSource::BesqAdditivity {
        a1: 0.5,
        a2: 0.5,
        t: 1.0,
    });
    sources.push(PairSource::TimeChangedComplexBmVsComplexOu {
        a: 1.0,
        b: 0.5,
        t: 1.0,
    });
    for src in &sources {
        let r = distribution_equiv(src, n, 0.01, &streams).unwrap();
        passline(
            4,
            r.verdict == Verdict::Pass,
            &format!(
                "{} (KS {:.5} < {:.5})",
                src.label(),
                r.metrics["ks_statistic"],
                r.metrics["ks_critical"]
            ),
        );
    }
}

// ---------------------------------------------------------------- 5

#[test]
fn criterion_5_lp_bound() {
    let streams = Streams::new(MASTER_SEED).namespaced("lp");
    let policy = StepPolicy {
        scheme: Scheme::Euler,
        cap_total: 1 << 14,
        ..Default::default()
    };
    for alpha in [1.0, 2.0] {
        for p in [0.25, 0.5] {
            let r = lp_bound_check(alpha, p, &[0.5, 1.0, 4.0], 100_000, &policy, &streams).unwrap();
            passline(
                5,
                r.verdict == Verdict::Pass,
                &format!(
                    "lp bound alpha={alpha} p={p}: worst margin {:.4} (bound at t=1: {:.4})",
                    r.metrics["worst_margin"],
                    lp_bound_value(alpha, p, 1.0)
                ),
            );
        }
    }
}

// ---------------------------------------------------------------- 6

#[test]
fn criterion_6_controllability_suite() {
    let streams = Streams::new(MASTER_SEED).namespaced("controllability");
    let mk = |beta: f64, gamma: f64, c: f64, ts: [f64; 4], ls: [f64; 4], scheme: Scheme| {
        ControllabilityConfig {
            beta,
            gamma,
            big_c: c,
            t_grid: ts.to_vec(),
            lambda_grid: ls.to_vec(),
            n_paths: 10_000,
            z: 4.0,
            policy: StepPolicy {
                scheme,
                cap_total: 1 << 15,
                ..Default::default()
            },
        }
    };

    let ou = ProcessSpec::new(Family::Ou { alpha: 1.0 }).unwrap();
    let r = controllability_check(
        &ou,
        &mk(
            2.0,
            1.0,
            1.0,
            [0.25, 0.5, 1.0, 2.0],
            [0.25, 0.5, 0.75, 1.0],
            Scheme::Auto,
        ),
        &streams,
    )
    .unwrap();
    passline(
        6,
        r.verdict == Verdict::Pass,
        &format!(
            "ou controllable: worst margin {:.4}",
            r.metrics["worst_margin"]
        ),
    );

    for alpha in [0.5, 2.0] {
        let k = (1.0f64 / alpha).ceil();
        let spec = ProcessSpec::new(Family::Besq { alpha }).unwrap();
        let r = controllability_check(
            &spec,
            &mk(
                4.0,
                2.0f64.powf(-k),
                2.0f64.powf(k),
                [0.25, 0.5, 1.0, 2.0],
                [0.5, 1.0, 2.0, 4.0],
                Scheme::Euler,
            ),
            &streams,
        )
        .unwrap();
        passline(
            6,
            r.verdict == Verdict::Pass,
            &format!(
                "besq alpha={alpha} controllable: worst margin {:.4}",
                r.metrics["worst_margin"]
            ),
        );
    }

    let refl = ProcessSpec::new(Family::ReflectedBmDrift { mu: 1.0 }).unwrap();
    let r = controllability_check(
        &refl,
        &mk(
            2.0,
            1.0,
            2.0,
            [0.5, 1.0, 2.0, 4.0],
            [0.25, 0.5, 0.75, 1.0],
            Scheme::Euler,
        ),
        &streams,
    )
    .unwrap();
    passline(
        6,
        r.verdict == Verdict::Pass,
        &format!(
            "reflected controllable: worst margin {:.4}",
            r.metrics["worst_margin"]
        ),
    );

    // falsification: a deliberately wrong constant must be rejected
    let besq = ProcessSpec::new(Family::Besq { alpha: 2.0 }).unwrap();
    let r = controllability_check(
        &besq,
        &mk(
            4.0,
            0.5,
            0.01,
            [0.25, 0.5, 1.0, 2.0],
            [0.5, 1.0, 2.0, 4.0],
            Scheme::Euler,
        ),
        &streams.namespaced("wrong-c"),
    )
    .unwrap();
    passline(
        6,
        r.verdict == Verdict::Fail,
        "wrong constant C = 0.01 rejected",
    );
}

// ---------------------------------------------------------------- 7

fn envelope_policy(scheme: Scheme) -> StepPolicy {
    StepPolicy {
        steps_per_unit: 4096.0,
        cap_total: 1 << 16,
        min_per_segment: 64,
        scheme,
    }
}

fn acceptance_f_list() -> Vec<ModerateFn> {
    vec![
        ModerateFn::new(ModerateKind::Pow { p: 0.5 }).unwrap(),
        ModerateFn::new(ModerateKind::Pow { p: 1.0 }).unwrap(),
        ModerateFn::new(ModerateKind::Pow { p: 2.0 }).unwrap(),
        ModerateFn::new(ModerateKind::PowLog { p: 1.0, q: 1.0 }).unwrap(),
    ]
}

#[test]
fn criterion_7_two_sided_envelopes() {
    let streams = Streams::new(MASTER_SEED).namespaced("envelope");
    let t_grid = log_spaced(1e-2, 1e4, 13);
    let f_list = acceptance_f_list();
    let pilot = std::env::var("SUPREMA_PILOT").is_ok();

    struct Target {
        family: Family,
        scheme: Scheme,
        levels: [f64; 3],
    }
    let targets = [
        Target {
            family: Family::Ou { alpha: 1.0 },
            scheme: Scheme::Auto,
            levels: [0.8, 1.2, 1.6],
        },
        Target {
            family: Family::BmDrift { mu: 1.0 },
            scheme: Scheme::Auto,
            levels: [0.8, 1.2, 1.6],
        },
        Target {
            family: Family::ReflectedBmDrift { mu: 1.0 },
            scheme: Scheme::Auto,
            levels: [0.8, 1.2, 1.6],
        },
        Target {
            family: Family::Cir {
                a: 1.0,
                b: -1.0,
                c: 2.0,
            },
            scheme: Scheme::Euler,
            levels: [1.0, 1.5, 2.0],
        },
        Target {
            family: Family::Besq { alpha: 1.0 },
            scheme: Scheme::Euler,
            levels: [1.5, 2.5, 4.0],
        },
        Target {
            family: Family::Bessel { alpha: 2.0 },
            scheme: Scheme::Euler,
            levels: [1.0, 1.5, 2.0],
        },
        Target {
            family: Family::RadialOu {
                alpha: 2.0,
                beta: 0.5,
            },
            scheme: Scheme::Euler,
            levels: [1.2, 1.7, 2.2],
        },
        Target {
            family: Family::ComplexOu { a: 1.0, b: 1.0 },
            scheme: Scheme::Auto,
            levels: [1.0, 1.4, 1.8],
        },
        Target {
            family: Family::ComplexBm,
            scheme: Scheme::Auto,
            levels: [1.0, 2.0, 3.0],
        },
    ];

    for target in &targets {
        let spec = ProcessSpec::new(target.family).unwrap();
        let cfg = TwoSidedConfig {
            t_grid: t_grid.clone(),
            n_paths: 100_000,
            z: 4.0,
            policy: envelope_policy(target.scheme),
            hitting_levels: target.levels.to_vec(),
            hitting_cap: 200.0,
            hitting_paths: 2000,
        };
        let out = two_sided_check(
            &spec,
            EnvelopeForm::standard(&target.family),
            &f_list,
            &cfg,
            &|desc| envelope_spread_limit(target.family.name(), desc),
            &streams,
        )
        .unwrap();
        if pilot {
            for (desc, env) in &out.envelopes {
                println!(
                    "PILOT {} {} spread {:.4} min_ratio {:.5}",
                    target.family.name(),
                    desc,
                    env.spread,
                    env.min_ratio
                );
            }
            for (k, v) in &out.report.metrics {
                if k.starts_with("hit_") {
                    println!("PILOT {} {k} = {v:.5}", target.family.name());
                }
            }
        }
        passline(
            7,
            out.report.verdict == Verdict::Pass,
            &format!(
                "envelope {}: spreads within frozen limits ({:?})",
                target.family.name(),
                out.report
                    .witnesses
                    .iter()
                    .map(|w| w.label.clone())
                    .collect::<Vec<_>>()
            ),
        );
    }

    // the normalized complex BM form shares dynamics but tracks the
    // time-normalized modulus against the doubly logarithmic growth
    let cbm = ProcessSpec::new(Family::ComplexBm).unwrap();
    let cfg = TwoSidedConfig {
        t_grid: t_grid.clone(),
        n_paths: 100_000,
        z: 4.0,
        policy: envelope_policy(Scheme::Auto),
        hitting_levels: vec![],
        hitting_cap: 0.0,
        hitting_paths: 0,
    };
    let out = two_sided_check(
        &cbm,
        EnvelopeForm::complex_bm_normalized(),
        &f_list,
        &cfg,
        &|desc| envelope_spread_limit("complex_bm_normalized", desc),
        &streams,
    )
    .unwrap();
    if pilot {
        for (desc, env) in &out.envelopes {
            println!(
                "PILOT complex_bm_normalized {} spread {:.4} min_ratio {:.5}",
                desc, env.spread, env.min_ratio
            );
        }
    }
    passline(
        7,
        out.report.verdict == Verdict::Pass,
        "envelope complex_bm (normalized form)",
    );

    // falsification: the wrong growth for OU must blow past the limit
    let ou = ProcessSpec::new(Family::Ou { alpha: 1.0 }).unwrap();
    let cfg = TwoSidedConfig {
        t_grid,
        n_paths: 20_000,
        z: 4.0,
        policy: envelope_policy(Scheme::Auto),
        hitting_levels: vec![],
        hitting_cap: 0.0,
        hitting_paths: 0,
    };
    let wrong = EnvelopeForm {
        growth: GrowthKind::Bessel, // sqrt(t) against a log^{1/2} process
        observable: Observable::Modulus,
        label: "_wrong_growth",
    };
    let f_lin = [ModerateFn::new(ModerateKind::Pow { p: 1.0 }).unwrap()];
    let out = two_sided_check(
        &ou,
        wrong,
        &f_lin,
        &cfg,
        &|_| WRONG_GROWTH_SPREAD_LIMIT,
        &streams.namespaced("wrong-g"),
    )
    .unwrap();
    let spread = out.envelopes[0].1.spread;
    passline(
        7,
        out.report.verdict == Verdict::Fail && spread > WRONG_GROWTH_SPREAD_LIMIT,
        &format!("wrong growth rejected (spread {spread:.1} > {WRONG_GROWTH_SPREAD_LIMIT})"),
    );
}

// ---------------------------------------------------------------- 8

#[test]
fn criterion_8_good_lambda_suite() {
    let streams = Streams::new(MASTER_SEED).namespaced("good-lambda");
    let deltas: Vec<f64> = (1..=4).map(|k| 0.5f64.powi(k)).collect();
    let policy = StepPolicy {
        steps_per_unit: 1024.0,
        cap_total: 1 << 15,
        min_per_segment: 16,
        scheme: Scheme::Auto,
    };

    struct Case {
        family: Family,
        pair_growth: GrowthKind,
        phi: Box<dyn Fn(f64) -> f64>,
        levels: [f64; 3],
        t_cap: f64,
    }
    let cases = [
        Case {
            family: Family::Ou { alpha: 1.0 },
            pair_growth: GrowthKind::Ou { alpha: 1.0 },
            phi: Box::new(|d| 1.0 * d * d),
            levels: [1.0, 1.5, 2.0],
            t_cap: 4.0,
        },
        Case {
            family: Family::BmDrift { mu: 1.0 },
            pair_growth: GrowthKind::BmDriftExact { mu: 1.0 },
            phi: Box::new(|d| d),
            levels: [1.0, 1.5, 2.0],
            t_cap: 4.0,
        },
    ];

    for case in &cases {
        let spec = ProcessSpec::new(case.family).unwrap();
        let growth = Growth::new(case.pair_growth);
        for (li, &level) in case.levels.iter().enumerate() {
            // tau = t_cap ^ tau_level, a bona fide stopping time; the pair
            // is X = g(tau), Y = X*_tau
            let (g_tau, sups) = min_hit_pairs(
                &spec,
                &growth,
                level,
                case.t_cap,
                10_000,
                &policy,
                &streams.namespaced(&format!("{}/{li}", case.family.name())),
            )
            .unwrap();
            // lambda grid spanning the X sample range
            let x_max = g_tau.iter().cloned().fold(f64::MIN, f64::max);
            let lambda_grid = log_grid(x_max / 256.0, x_max * 1.01, 33);
            let out = good_lambda_check(
                &format!("{}_l{}", case.family.name(), level),
                &g_tau,
                &sups,
                2.0,
                &deltas,
                &lambda_grid,
                Some(&*case.phi),
                4.0,
                streams.master(),
            )
            .unwrap();
            passline(
                8,
                out.report.verdict == Verdict::Pass,
                &format!(
                    "good-lambda {} level {level}: profile {:?} dominated and nonincreasing",
                    case.family.name(),
                    out.phi_hat
                ),
            );
        }
    }
}

// ---------------------------------------------------------------- 9

#[test]
fn criterion_9_conformal_scenarios() {
    let streams = Streams::new(MASTER_SEED).namespaced("conformal");
    let f_list = acceptance_f_list();
    let t_list = vec![0.25, 1.0, 4.0];
    let cfg = ConformalConfig {
        t_list: t_list.clone(),
        n_steps: 1 << 14,
        n_paths: 6000,
        z: 4.0,
    };

    // identity map reproduces the complex BM envelope within the band
    let out = conformal_scenario(ConformalMap::Identity, &f_list, &cfg, &streams).unwrap();
    passline(
        9,
        out.report.verdict == Verdict::Pass,
        "identity map spreads within limits",
    );
    let cbm = ProcessSpec::new(Family::ComplexBm).unwrap();
    let growth = Growth::for_family(&cbm.family());
    for f in &f_list {
        let env = ratio_envelope(
            &cbm,
            f,
            &growth,
            Observable::Modulus,
            &t_list,
            6000,
            4.0,
            &StepPolicy {
                steps_per_unit: 4096.0,
                cap_total: 1 << 15,
                ..Default::default()
            },
            &streams.namespaced(&format!("cbm-ref/{}", f.descriptor())),
        )
        .unwrap();
        for (ti, p) in env.points.iter().enumerate() {
            let (t, desc, ratio, se_log) = out
                .modulus_ratios
                .iter()
                .find(|(t, d, _, _)| *t == t_list[ti] && *d == f.descriptor())
                .cloned()
                .unwrap();
            let band = 4.0 * (se_log + p.se / p.mean_f_sup) + 0.05;
            let rel = (ratio / p.ratio).ln().abs();
            passline(
                9,
                rel <= band,
                &format!(
                    "identity map matches complex BM envelope at t={t} {desc}: |log ratio| {rel:.4} <= {band:.4}"
                ),
            );
        }
    }

    // analytic maps: finite spreads for both forms, refinement resolved
    for map in [ConformalMap::Square, ConformalMap::ExpM1] {
        let out = conformal_scenario(map, &f_list, &cfg, &streams).unwrap();
        let delta = out.report.metrics["qv_refinement_delta"];
        passline(
            9,
            out.report.verdict == Verdict::Pass && delta <= 0.05,
            &format!(
                "{} map spreads finite, refinement delta {delta:.4}",
                map.label()
            ),
        );
        if map == ConformalMap::Square {
            let riemann = out.report.metrics["qv_riemann_delta"];
            passline(
                9,
                riemann <= 0.05,
                &format!("squared-map quadratic variation routes agree: {riemann:.4}"),
            );
        }
    }
}
