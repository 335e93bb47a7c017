//! Empirical good-lambda profile: from paired samples (X_i, Y_i),
//!
//!   phi_hat(delta) = sup_lambda  P(X >= beta lambda, Y < delta lambda)
//!                              / P(X >= lambda),
//!
//! asserted nonincreasing as delta decreases (exact for shared samples) and,
//! when an analytic control phi is supplied, dominated by phi(delta) plus a
//! confidence allowance at the argmax.

use crate::error::{Error, Result};
use crate::stats::wilson_ci;
use crate::verify::{wdata, CheckReport, Table};

pub struct GoodLambdaOutcome {
    pub report: CheckReport,
    /// phi_hat per delta, in input order
    pub phi_hat: Vec<f64>,
}

/// The numerator event is nested inside the denominator event (beta > 1),
/// so the ratio is a conditional proportion; its band is a Wilson interval
/// on k_num out of k_den.
pub fn good_lambda_check(
    name: &str,
    x_samples: &[f64],
    y_samples: &[f64],
    beta: f64,
    delta_list: &[f64],
    lambda_grid: &[f64],
    analytic_phi: Option<&dyn Fn(f64) -> f64>,
    z: f64,
    seed: u64,
) -> Result<GoodLambdaOutcome> {
    if x_samples.len() != y_samples.len() {
        return Err(Error::SampleSizeMismatch(x_samples.len(), y_samples.len()));
    }
    if !(beta > 1.0) {
        return Err(Error::domain(
            "good_lambda",
            format!("beta must be > 1, got {beta}"),
        ));
    }
    let mut report = CheckReport::new(format!("good_lambda.{name}"), seed);
    report.param("beta", beta);
    report.param("n", x_samples.len());
    report.param("z", z);

    let mut table = Table {
        name: format!("good_lambda_{name}"),
        columns: vec![
            "delta".into(),
            "phi_hat".into(),
            "phi_upper".into(),
            "analytic_phi".into(),
            "argmax_lambda".into(),
        ],
        rows: Vec::new(),
    };

    let mut phi_hat = Vec::with_capacity(delta_list.len());
    let mut excluded_cells = 0usize;
    for &delta in delta_list {
        let mut best = 0.0f64;
        let mut best_upper = 0.0f64;
        let mut best_lambda = f64::NAN;
        for &lambda in lambda_grid {
            let mut k_den = 0u64;
            let mut k_num = 0u64;
            for (&x, &y) in x_samples.iter().zip(y_samples) {
                if x >= lambda {
                    k_den += 1;
                    if x >= beta * lambda && y < delta * lambda {
                        k_num += 1;
                    }
                }
            }
            if k_den == 0 {
                excluded_cells += 1;
                continue;
            }
            let ratio = k_num as f64 / k_den as f64;
            if ratio > best {
                best = ratio;
                best_upper = wilson_ci(k_num, k_den, z).1;
                best_lambda = lambda;
            }
        }
        let phi = analytic_phi.map(|f| f(delta)).unwrap_or(f64::NAN);
        table
            .rows
            .push(vec![delta, best, best_upper, phi, best_lambda]);
        if let Some(f) = analytic_phi {
            let bound = f(delta);
            // domination with the band: the Wilson upper end must not clear
            // the analytic control by more than the band itself allows
            if best > bound && best - bound > best_upper - best {
                report.fail_with(
                    "empirical profile exceeds the analytic control beyond the band",
                    wdata([
                        ("delta", delta),
                        ("phi_hat", best),
                        ("bound", bound),
                        ("argmax_lambda", best_lambda),
                    ]),
                );
            }
        }
        phi_hat.push(best);
    }
    // monotone in delta: shared samples make the joint event monotone
    for w in 0..phi_hat.len().saturating_sub(1) {
        let (d0, d1) = (delta_list[w], delta_list[w + 1]);
        if d1 < d0 && phi_hat[w + 1] > phi_hat[w] + 1e-15 {
            report.fail_with(
                "profile not monotone under delta refinement",
                wdata([
                    ("delta_hi", d0),
                    ("delta_lo", d1),
                    ("phi_hi", phi_hat[w]),
                    ("phi_lo", phi_hat[w + 1]),
                ]),
            );
        }
    }
    if excluded_cells > 0 {
        report.note(format!(
            "{excluded_cells} zero-denominator lambda cells excluded"
        ));
        report.metric("excluded_cells", excluded_cells as f64);
    }
    if phi_hat.iter().all(|&p| p == 0.0) {
        report.note(
            "all joint exceedance events empty at this sample size; domination holds vacuously",
        );
    }
    for (i, &p) in phi_hat.iter().enumerate() {
        report.metric(&format!("phi_hat_{i}"), p);
    }
    report.tables.push(table);
    Ok(GoodLambdaOutcome { report, phi_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    #[test]
    fn identical_samples_give_empty_joint_event() {
        // X = Y: {X >= 2 lambda, X < 0.5 lambda} is contradictory
        let xs: Vec<f64> = (1..1000).map(|i| i as f64 / 100.0).collect();
        let out = good_lambda_check(
            "self",
            &xs,
            &xs,
            2.0,
            &[0.5],
            &[0.5, 1.0, 2.0, 4.0],
            None,
            4.0,
            1,
        )
        .unwrap();
        assert_eq!(out.phi_hat[0], 0.0);
        assert_eq!(out.report.verdict, Verdict::Pass);
    }

    #[test]
    fn monotone_by_construction_on_shared_samples() {
        // arbitrary dependent pair
        let xs: Vec<f64> = (0..5000)
            .map(|i| ((i * 2654435761u64) % 1000) as f64 / 100.0 + 0.01)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x * 0.7).sin().abs() * x).collect();
        let deltas = [0.8, 0.4, 0.2, 0.1];
        let grid: Vec<f64> = (0..30).map(|i| 0.05 * 1.3f64.powi(i)).collect();
        let out = good_lambda_check("dep", &xs, &ys, 2.0, &deltas, &grid, None, 4.0, 2).unwrap();
        for w in out.phi_hat.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
        assert_eq!(out.report.verdict, Verdict::Pass);
    }

    #[test]
    fn mismatched_lengths_error() {
        assert!(good_lambda_check(
            "bad",
            &[1.0],
            &[1.0, 2.0],
            2.0,
            &[0.5],
            &[1.0],
            None,
            4.0,
            3
        )
        .is_err());
    }
}
