//! Run configuration: a single TOML file with nested sections. Unknown keys
//! are errors (fail-closed), every threshold override is echoed into the
//! manifest, and the master seed is mandatory — there is no wall-clock
//! seeding anywhere.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use suprema::moderate::ModerateFn;
use suprema::{Family, ProcessSpec};

pub const ALL_CHECKS: &[&str] = &[
    "analytic",
    "phi",
    "sampler",
    "identity",
    "lp",
    "controllability",
    "envelope",
    "good_lambda",
    "conformal",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_lo: f64,
    pub t_hi: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_lo: 1e-2,
            t_hi: 1e4,
            points: 13,
        }
    }
}

impl GridSpec {
    pub fn times(&self) -> Vec<f64> {
        (0..self.points)
            .map(|i| self.t_lo * (self.t_hi / self.t_lo).powf(i as f64 / (self.points - 1) as f64))
            .collect()
    }
}

/// One process block. Parameters are per-kind; anything irrelevant to the
/// declared kind is rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessBlock {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl ProcessBlock {
    pub fn family(&self) -> Result<Family> {
        let req = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| anyhow!("process `{}` requires field `{name}`", self.kind))
        };
        let forbid = |v: Option<f64>, name: &str| {
            if v.is_some() {
                bail!("process `{}` does not take field `{name}`", self.kind);
            }
            Ok(())
        };
        let family = match self.kind.as_str() {
            "ou" => {
                forbid(self.mu, "mu")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::Ou {
                    alpha: req(self.alpha, "alpha")?,
                }
            }
            "bm_drift" => {
                forbid(self.alpha, "alpha")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::BmDrift {
                    mu: req(self.mu, "mu")?,
                }
            }
            "reflected_bm_drift" => {
                forbid(self.alpha, "alpha")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::ReflectedBmDrift {
                    mu: req(self.mu, "mu")?,
                }
            }
            "cir" => {
                forbid(self.alpha, "alpha")?;
                forbid(self.mu, "mu")?;
                forbid(self.beta, "beta")?;
                Family::Cir {
                    a: req(self.a, "a")?,
                    b: req(self.b, "b")?,
                    c: req(self.c, "c")?,
                }
            }
            "besq" => {
                forbid(self.mu, "mu")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::Besq {
                    alpha: req(self.alpha, "alpha")?,
                }
            }
            "bessel" => {
                forbid(self.mu, "mu")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::Bessel {
                    alpha: req(self.alpha, "alpha")?,
                }
            }
            "radial_ou" => {
                forbid(self.mu, "mu")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                Family::RadialOu {
                    alpha: req(self.alpha, "alpha")?,
                    beta: req(self.beta, "beta")?,
                }
            }
            "complex_ou" => {
                forbid(self.alpha, "alpha")?;
                forbid(self.mu, "mu")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::ComplexOu {
                    a: req(self.a, "a")?,
                    b: req(self.b, "b")?,
                }
            }
            "complex_bm" => {
                forbid(self.alpha, "alpha")?;
                forbid(self.mu, "mu")?;
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                forbid(self.c, "c")?;
                forbid(self.beta, "beta")?;
                Family::ComplexBm
            }
            other => bail!("unknown process kind `{other}`"),
        };
        // parameter sign constraints (names the b < 0 requirement for CIR)
        ProcessSpec::new(family).map_err(|e| anyhow!("{e}"))?;
        Ok(family)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModerateSection {
    #[serde(default)]
    pub descriptors: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// master seed; mandatory
    pub seed: u64,
    #[serde(default = "default_n_paths")]
    pub n_paths: usize,
    /// 0 means the library default pool size
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub out_dir: Option<String>,
    /// subset of ALL_CHECKS; empty runs nothing but still writes a manifest
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub plots: bool,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub process: Vec<ProcessBlock>,
    #[serde(default)]
    pub moderate: ModerateSection,
    /// threshold overrides, echoed verbatim into the manifest
    #[serde(default)]
    pub thresholds: BTreeMap<String, f64>,
}

fn default_n_paths() -> usize {
    100_000
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).context("config parse error")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for name in &self.checks {
            if !ALL_CHECKS.contains(&name.as_str()) {
                bail!("unknown check `{name}` (known: {})", ALL_CHECKS.join(", "));
            }
        }
        for p in &self.process {
            p.family()?;
        }
        for d in &self.moderate.descriptors {
            ModerateFn::parse(d).map_err(|e| anyhow!("{e}"))?;
        }
        if self.n_paths < 1000 {
            bail!("n_paths must be at least 1000, got {}", self.n_paths);
        }
        if !(self.grid.t_lo > 0.0 && self.grid.t_hi > self.grid.t_lo && self.grid.points >= 2) {
            bail!("grid must satisfy 0 < t_lo < t_hi with at least 2 points");
        }
        Ok(())
    }

    pub fn families(&self) -> Vec<Family> {
        self.process
            .iter()
            .map(|p| p.family().expect("validated"))
            .collect()
    }

    pub fn moderates(&self) -> Vec<ModerateFn> {
        if self.moderate.descriptors.is_empty() {
            suprema::moderate::catalog()
        } else {
            self.moderate
                .descriptors
                .iter()
                .map(|d| ModerateFn::parse(d).expect("validated"))
                .collect()
        }
    }

    /// output directory: config, then SUPREMA_OUT, then ./suprema-out
    pub fn resolve_out_dir(&self) -> std::path::PathBuf {
        if let Some(d) = &self.out_dir {
            return d.into();
        }
        if let Ok(root) = std::env::var("SUPREMA_OUT") {
            return root.into();
        }
        "suprema-out".into()
    }
}
