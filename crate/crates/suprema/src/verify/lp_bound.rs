//! L^p bound for the squared Bessel running maximum, 0 < p < 1:
//!
//!   E (Y*_t)^p <= alpha^p (2 - p) / (1 - p) t^p
//!
//! asserted with a 4-standard-error margin at every requested t.

use crate::analytic::{Growth, GrowthKind};
use crate::error::{Error, Result};
use crate::moderate::{ModerateFn, ModerateKind};
use crate::montecarlo::{ratio_envelope, Observable, StepPolicy};
use crate::process::{Family, ProcessSpec};
use crate::rng::Streams;
use crate::verify::{wdata, CheckReport, Table};

pub fn lp_bound_value(alpha: f64, p: f64, t: f64) -> f64 {
    alpha.powf(p) * (2.0 - p) / (1.0 - p) * t.powf(p)
}

pub fn lp_bound_check(
    alpha: f64,
    p: f64,
    t_list: &[f64],
    n_paths: usize,
    policy: &StepPolicy,
    streams: &Streams,
) -> Result<CheckReport> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "lp_bound",
            format!("p must be in (0,1), got {p}"),
        ));
    }
    let streams = streams.namespaced(&format!("lp/{alpha}/{p}"));
    let mut report = CheckReport::new(format!("lp_bound.besq_{alpha}_p{p}"), streams.master());
    report.param("alpha", alpha);
    report.param("p", p);
    report.param("n_paths", n_paths);

    let spec = ProcessSpec::new(Family::Besq { alpha })?;
    let f = ModerateFn::new(ModerateKind::Pow { p })?;
    // one shared set of paths across all t's; growth g(t) = t so the
    // envelope's mean_f_sup is exactly E (Y*_t)^p
    let env = ratio_envelope(
        &spec,
        &f,
        &Growth::new(GrowthKind::Besq),
        Observable::Modulus,
        t_list,
        n_paths,
        4.0,
        policy,
        &streams,
    )?;
    let mut table = Table {
        name: format!("lp_bound_a{alpha}_p{p}"),
        columns: vec![
            "t".into(),
            "estimate".into(),
            "se".into(),
            "bound".into(),
            "margin".into(),
        ],
        rows: Vec::new(),
    };
    for pt in &env.points {
        let bound = lp_bound_value(alpha, p, pt.t);
        let margin = pt.mean_f_sup - 4.0 * pt.se - bound;
        table
            .rows
            .push(vec![pt.t, pt.mean_f_sup, pt.se, bound, margin]);
        if margin > 0.0 {
            report.fail_with(
                "estimate exceeds the bound beyond 4 standard errors",
                wdata([("t", pt.t), ("estimate", pt.mean_f_sup), ("bound", bound)]),
            );
        }
    }
    report.metric(
        "worst_margin",
        table
            .rows
            .iter()
            .map(|r| r[4])
            .fold(f64::NEG_INFINITY, f64::max),
    );
    report.tables.push(table);
    Ok(report)
}
