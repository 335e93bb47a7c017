//! Conformal scenarios: M is an analytic map of a simulated complex
//! Brownian motion, its quadratic variation [X,X] is accumulated pathwise
//! from the real part's squared increments, and two envelope forms are
//! checked as ratios of means:
//!
//!   E F(max |M|)                  against  E F(sqrt([X,X]_T)),
//!   E F(max |M| / sqrt(1+[X,X]))  against  E F(g([X,X]_T)),
//!   g(t) = log^{1/2}(1 + log(1 + t)).
//!
//! The refinement control compares [X,X] at the full step resolution with
//! the coarsened (every other point) sum on the same Brownian path; for the
//! squared map the alternative route 4 ∫ |W|^2 ds is compared pathwise too.

use crate::analytic::{Growth, GrowthKind};
use crate::error::Result;
use crate::moderate::ModerateFn;
use crate::rng::Streams;
use crate::stats::mean_se;
use crate::verify::thresholds::{conformal_spread_limit, MIN_RATIO_FLOOR, QV_REFINEMENT_LIMIT};
use crate::verify::{wdata, CheckReport, Table};
use rand_distr::Distribution;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConformalMap {
    /// M = W (reduces exactly to the complex BM case, [X,X]_t = t)
    Identity,
    /// M = W^2
    Square,
    /// M = e^W - 1
    ExpM1,
}

impl ConformalMap {
    pub fn label(&self) -> &'static str {
        match self {
            ConformalMap::Identity => "identity",
            ConformalMap::Square => "square",
            ConformalMap::ExpM1 => "exp",
        }
    }

    fn apply(&self, re: f64, im: f64) -> (f64, f64) {
        match self {
            ConformalMap::Identity => (re, im),
            ConformalMap::Square => (re * re - im * im, 2.0 * re * im),
            ConformalMap::ExpM1 => {
                let r = re.exp();
                (r * im.cos() - 1.0, r * im.sin())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConformalConfig {
    /// checkpoint times for the envelope ratios
    pub t_list: Vec<f64>,
    /// fine-resolution steps per path up to the last checkpoint
    pub n_steps: usize,
    pub n_paths: usize,
    pub z: f64,
}

/// Per-checkpoint path statistics.
struct PathStats {
    sup_mod: Vec<f64>,
    sup_norm: Vec<f64>,
    qv: Vec<f64>,
    qv_coarse_final: f64,
    qv_riemann_final: f64,
}

fn simulate(
    map: ConformalMap,
    cfg: &ConformalConfig,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> PathStats {
    let t_max = *cfg.t_list.last().expect("nonempty t list");
    let n = cfg.n_steps;
    let dt = t_max / n as f64;
    let sqrt_dt = dt.sqrt();
    let (mut w_re, mut w_im) = (0.0f64, 0.0f64);
    let (mut m_re_prev, mut m_im_prev) = map.apply(0.0, 0.0);
    let mut qv = 0.0f64;
    let mut qv_coarse = 0.0f64;
    let mut re_at_even = m_re_prev;
    let mut qv_riemann = 0.0f64;
    let mut sup_mod = 0.0f64;
    let mut sup_norm = 0.0f64;
    let mut out = PathStats {
        sup_mod: Vec::with_capacity(cfg.t_list.len()),
        sup_norm: Vec::with_capacity(cfg.t_list.len()),
        qv: Vec::with_capacity(cfg.t_list.len()),
        qv_coarse_final: 0.0,
        qv_riemann_final: 0.0,
    };
    let mut next_cp = 0usize;
    for k in 1..=n {
        // Riemann sum of 4 |W|^2 ds uses the left endpoint
        qv_riemann += 4.0 * (w_re * w_re + w_im * w_im) * dt;
        let z1: f64 = rand_distr::StandardNormal.sample(rng);
        let z2: f64 = rand_distr::StandardNormal.sample(rng);
        w_re += sqrt_dt * z1;
        w_im += sqrt_dt * z2;
        let (m_re, m_im) = map.apply(w_re, w_im);
        let d = m_re - m_re_prev;
        qv += d * d;
        if k % 2 == 0 {
            let dc = m_re - re_at_even;
            qv_coarse += dc * dc;
            re_at_even = m_re;
        }
        let modulus = m_re.hypot(m_im);
        sup_mod = sup_mod.max(modulus);
        sup_norm = sup_norm.max(modulus / (1.0 + qv).sqrt());
        m_re_prev = m_re;
        m_im_prev = m_im;
        // checkpoints aligned to the step grid
        let t_k = dt * k as f64;
        while next_cp < cfg.t_list.len() && t_k + 0.5 * dt >= cfg.t_list[next_cp] {
            out.sup_mod.push(sup_mod);
            out.sup_norm.push(sup_norm);
            out.qv.push(qv);
            next_cp += 1;
        }
    }
    let _ = m_im_prev;
    while next_cp < cfg.t_list.len() {
        out.sup_mod.push(sup_mod);
        out.sup_norm.push(sup_norm);
        out.qv.push(qv);
        next_cp += 1;
    }
    out.qv_coarse_final = qv_coarse;
    out.qv_riemann_final = qv_riemann;
    out
}

pub struct ConformalOutcome {
    pub report: CheckReport,
    /// per (t, moderate): modulus-form ratio and its log-scale se
    pub modulus_ratios: Vec<(f64, String, f64, f64)>,
}

pub fn conformal_scenario(
    map: ConformalMap,
    f_list: &[ModerateFn],
    cfg: &ConformalConfig,
    streams: &Streams,
) -> Result<ConformalOutcome> {
    let streams = streams.namespaced(&format!("conformal/{}", map.label()));
    let mut report = CheckReport::new(format!("conformal.{}", map.label()), streams.master());
    report.param("n_paths", cfg.n_paths);
    report.param("n_steps", cfg.n_steps);
    let g_norm = Growth::new(GrowthKind::ComplexBmNormalized);

    let stats: Vec<PathStats> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.path(i);
            simulate(map, cfg, &mut rng)
        })
        .collect();

    // refinement control on the final-time quadratic variation
    let qv_final: Vec<f64> = stats.iter().map(|s| *s.qv.last().unwrap()).collect();
    let refine: Vec<f64> = stats
        .iter()
        .map(|s| (s.qv.last().unwrap() - s.qv_coarse_final).abs())
        .collect();
    let qv_mean = mean_se(&qv_final).mean;
    let refine_delta = mean_se(&refine).mean / qv_mean;
    report.metric("qv_refinement_delta", refine_delta);
    if refine_delta > QV_REFINEMENT_LIMIT {
        report.inconclusive_with(
            "quadratic variation not resolved at this step count",
            wdata([
                ("refinement_delta", refine_delta),
                ("limit", QV_REFINEMENT_LIMIT),
            ]),
        );
    }
    if map == ConformalMap::Square {
        // second route: 4 ∫ |W|^2 ds
        let riemann: Vec<f64> = stats
            .iter()
            .map(|s| (s.qv.last().unwrap() - s.qv_riemann_final).abs())
            .collect();
        let riemann_delta = mean_se(&riemann).mean / qv_mean;
        report.metric("qv_riemann_delta", riemann_delta);
        if riemann_delta > QV_REFINEMENT_LIMIT {
            report.inconclusive_with(
                "squared-increment and Riemann quadratic variations disagree",
                wdata([
                    ("riemann_delta", riemann_delta),
                    ("limit", QV_REFINEMENT_LIMIT),
                ]),
            );
        }
    }

    let mut table = Table {
        name: format!("conformal_{}", map.label()),
        columns: vec![
            "moderate".into(),
            "t".into(),
            "ratio_modulus".into(),
            "ratio_normalized".into(),
        ],
        rows: Vec::new(),
    };
    let mut modulus_ratios = Vec::new();
    for (fi, f) in f_list.iter().enumerate() {
        let desc = f.descriptor();
        let mut r_mod = Vec::with_capacity(cfg.t_list.len());
        let mut r_norm = Vec::with_capacity(cfg.t_list.len());
        for (ti, &t) in cfg.t_list.iter().enumerate() {
            let num_mod = mean_se(
                &stats
                    .iter()
                    .map(|s| f.eval(s.sup_mod[ti]))
                    .collect::<Vec<_>>(),
            );
            let den_mod = mean_se(
                &stats
                    .iter()
                    .map(|s| f.eval(s.qv[ti].sqrt()))
                    .collect::<Vec<_>>(),
            );
            let ratio = num_mod.mean / den_mod.mean;
            let se_log = num_mod.se / num_mod.mean + den_mod.se / den_mod.mean;
            r_mod.push(ratio);
            modulus_ratios.push((t, desc.clone(), ratio, se_log));

            let num_n = mean_se(
                &stats
                    .iter()
                    .map(|s| f.eval(s.sup_norm[ti]))
                    .collect::<Vec<_>>(),
            );
            let den_n = mean_se(
                &stats
                    .iter()
                    .map(|s| f.eval(g_norm.eval(s.qv[ti]).expect("qv >= 0")))
                    .collect::<Vec<_>>(),
            );
            let ratio_n = num_n.mean / den_n.mean;
            r_norm.push(ratio_n);
            table.rows.push(vec![fi as f64, t, ratio, ratio_n]);
        }
        for (label, ratios) in [("modulus", &r_mod), ("normalized", &r_norm)] {
            let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let spread = max / min;
            let limit = conformal_spread_limit(map.label(), label);
            report.metric(&format!("spread_{label}[{desc}]"), spread);
            if !spread.is_finite() || spread > limit {
                report.fail_with(
                    format!("{label} spread above the frozen limit for {desc}"),
                    wdata([("spread", spread), ("limit", limit)]),
                );
            }
            if min < MIN_RATIO_FLOOR {
                report.fail_with(
                    format!("{label} ratio collapses for {desc}"),
                    wdata([("min_ratio", min)]),
                );
            }
        }
    }
    report.tables.push(table);
    Ok(ConformalOutcome {
        report,
        modulus_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moderate::{ModerateFn, ModerateKind};
    use crate::verify::Verdict;

    #[test]
    fn identity_map_qv_is_time() {
        let cfg = ConformalConfig {
            t_list: vec![1.0],
            n_steps: 1 << 12,
            n_paths: 200,
            z: 4.0,
        };
        let streams = Streams::new(77).namespaced("conformal/identity");
        let mut rng = streams.path(0);
        let s = simulate(ConformalMap::Identity, &cfg, &mut rng);
        // [X,X]_1 = sum of squared Gaussian increments ~ 1 within O(n^{-1/2})
        assert!((s.qv[0] - 1.0).abs() < 0.1, "qv {}", s.qv[0]);
    }

    #[test]
    fn square_map_finite_spreads() {
        let cfg = ConformalConfig {
            t_list: vec![0.25, 1.0],
            n_steps: 1 << 12,
            n_paths: 1500,
            z: 4.0,
        };
        let f = [ModerateFn::new(ModerateKind::Pow { p: 1.0 }).unwrap()];
        let out = conformal_scenario(ConformalMap::Square, &f, &cfg, &Streams::new(909)).unwrap();
        assert_ne!(
            out.report.verdict,
            Verdict::Fail,
            "{:?}",
            out.report.witnesses
        );
    }
}
