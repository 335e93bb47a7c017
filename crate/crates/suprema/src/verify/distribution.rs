//! Distribution-identity tests: two sample sets claimed equal in law are
//! compared with the two-sample KS statistic at a fixed level.
//!
//! Identities exercised here:
//!  * |complex OU|^2 at t is CIR(2, -2a, 2) at t;
//!  * the CIR transition composed over k substeps matches the single-shot
//!    time-changed squared-Bessel representation;
//!  * squared Bessel additivity in the dimension parameter;
//!  * e^{-at} W_{e^{2at}-1} / sqrt(2a) has the complex OU modulus law.

use crate::engine::{besq_additivity_pair, cir_transition, sample_transition};
use crate::error::{Error, Result};
use crate::process::{Family, ProcessSpec};
use crate::rng::Streams;
use crate::stats::{ks_critical, ks_statistic};
use crate::verify::{wdata, CheckReport};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug)]
pub enum PairSource {
    /// |ComplexOu(a, b)|^2 at t vs CIR(2, -2a, 2) at t
    ComplexOuModulusSquaredVsCir { a: f64, b: f64, t: f64 },
    /// CIR(a, b, c) at t via k exact substeps vs the one-shot representation
    CirVsTimeChangedBesq {
        a: f64,
        b: f64,
        c: f64,
        t: f64,
        substeps: usize,
    },
    /// BESQ(a1) + BESQ(a2) at t vs BESQ(a1 + a2) at t
    BesqAdditivity { a1: f64, a2: f64, t: f64 },
    /// e^{-at} W_{e^{2at}-1} / sqrt(2a) modulus vs |ComplexOu(a, b)| at t
    TimeChangedComplexBmVsComplexOu { a: f64, b: f64, t: f64 },
    /// two independent draws of the same CIR law (self test)
    CirSelf { a: f64, b: f64, c: f64, t: f64 },
}

impl PairSource {
    pub fn label(&self) -> String {
        match self {
            PairSource::ComplexOuModulusSquaredVsCir { a, b, t } => {
                format!("complex_ou_sq_vs_cir(a={a},b={b},t={t})")
            }
            PairSource::CirVsTimeChangedBesq { a, b, c, t, .. } => {
                format!("cir_vs_time_changed_besq(a={a},b={b},c={c},t={t})")
            }
            PairSource::BesqAdditivity { a1, a2, t } => format!("besq_additivity({a1}+{a2},t={t})"),
            PairSource::TimeChangedComplexBmVsComplexOu { a, b, t } => {
                format!("time_changed_cbm_vs_complex_ou(a={a},b={b},t={t})")
            }
            PairSource::CirSelf { a, b, c, t } => format!("cir_self(a={a},b={b},c={c},t={t})"),
        }
    }

    /// Draw the two samples, one path substream per index per side.
    pub fn draw(&self, n: usize, streams: &Streams) -> Result<(Vec<f64>, Vec<f64>)> {
        let sa = streams.namespaced("side-a");
        let sb = streams.namespaced("side-b");
        match *self {
            PairSource::ComplexOuModulusSquaredVsCir { a, b, t } => {
                let zspec = ProcessSpec::new(Family::ComplexOu { a, b })?;
                let left: Result<Vec<f64>> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sa.path(i);
                        let tr = sample_transition(zspec.family(), zspec.x0(), t, &mut rng)?;
                        let m = tr.state.modulus();
                        Ok(m * m)
                    })
                    .collect();
                let right: Vec<f64> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sb.path(i);
                        cir_transition(2.0, -2.0 * a, 2.0, 0.0, t, &mut rng)
                    })
                    .collect();
                Ok((left?, right))
            }
            PairSource::CirVsTimeChangedBesq {
                a,
                b,
                c,
                t,
                substeps,
            } => {
                let k = substeps.max(2);
                let left: Vec<f64> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sa.path(i);
                        let mut x = 0.0;
                        for _ in 0..k {
                            x = cir_transition(a, b, c, x, t / k as f64, &mut rng);
                        }
                        x
                    })
                    .collect();
                let right: Vec<f64> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sb.path(i);
                        cir_transition(a, b, c, 0.0, t, &mut rng)
                    })
                    .collect();
                Ok((left, right))
            }
            PairSource::BesqAdditivity { a1, a2, t } => {
                let pairs: Result<Vec<(f64, f64)>> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sa.path(i);
                        besq_additivity_pair(a1, a2, t, &mut rng)
                    })
                    .collect();
                let (left, right) = pairs?.into_iter().unzip();
                Ok((left, right))
            }
            PairSource::TimeChangedComplexBmVsComplexOu { a, b, t } => {
                let wspec = ProcessSpec::new(Family::ComplexBm)?;
                let h = (2.0 * a * t).exp_m1(); // e^{2at} - 1
                let scale = (-a * t).exp() / (2.0 * a).sqrt();
                let left: Result<Vec<f64>> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sa.path(i);
                        let tr = sample_transition(wspec.family(), wspec.x0(), h, &mut rng)?;
                        Ok(scale * tr.state.modulus())
                    })
                    .collect();
                let zspec = ProcessSpec::new(Family::ComplexOu { a, b })?;
                let right: Result<Vec<f64>> = (0..n as u64)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = sb.path(i);
                        let tr = sample_transition(zspec.family(), zspec.x0(), t, &mut rng)?;
                        Ok(tr.state.modulus())
                    })
                    .collect();
                Ok((left?, right?))
            }
            PairSource::CirSelf { a, b, c, t } => {
                let draw = |s: &Streams| -> Vec<f64> {
                    (0..n as u64)
                        .into_par_iter()
                        .map(|i| {
                            let mut rng = s.path(i);
                            cir_transition(a, b, c, 0.0, t, &mut rng)
                        })
                        .collect()
                };
                Ok((draw(&sa), draw(&sb)))
            }
        }
    }
}

pub fn distribution_equiv(
    source: &PairSource,
    n: usize,
    ks_level: f64,
    streams: &Streams,
) -> Result<CheckReport> {
    let streams = streams.namespaced(&format!("dist/{}", source.label()));
    let mut report = CheckReport::new(
        format!("distribution_equiv.{}", source.label()),
        streams.master(),
    );
    report.param("n", n);
    report.param("ks_level", ks_level);
    let (a, b) = source.draw(n, &streams)?;
    if a.len() != b.len() {
        return Err(Error::SampleSizeMismatch(a.len(), b.len()));
    }
    let d = ks_statistic(&a, &b);
    let crit = ks_critical(a.len(), b.len(), ks_level);
    report.metric("ks_statistic", d);
    report.metric("ks_critical", crit);
    if d > crit {
        report.fail_with(
            "KS statistic above the critical value",
            wdata([("d", d), ("critical", crit)]),
        );
    }
    Ok(report)
}
