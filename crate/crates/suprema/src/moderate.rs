//! Moderate functions: continuous increasing F with F(0) = 0 whose doubling
//! ratio sup F(beta x) / F(x) is finite for some beta > 1 (then for every
//! beta >= 1). The certificate here is empirical: a sup over a finite log
//! grid, necessary but not sufficient, and flagged as such in reports.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModerateKind {
    /// x^p, p > 0
    Pow { p: f64 },
    /// x^p log^q(1 + x)
    PowLog { p: f64, q: f64 },
    /// F(sqrt(x)) for an inner moderate F
    SqrtArg(Box<ModerateKind>),
}

impl ModerateKind {
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0, "moderate functions live on [0, inf)");
        match self {
            ModerateKind::Pow { p } => x.powf(*p),
            ModerateKind::PowLog { p, q } => x.powf(*p) * x.ln_1p().powf(*q),
            ModerateKind::SqrtArg(inner) => inner.eval(x.sqrt()),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ModerateKind::Pow { p } => format!("pow:{p}"),
            ModerateKind::PowLog { p, q } => format!("powlog:{p},{q}"),
            ModerateKind::SqrtArg(inner) => format!("sqrt_arg({})", inner.descriptor()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub beta: f64,
    /// empirical sup of F(beta x)/F(x) over the certification grid
    pub sup_ratio: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModerateFn {
    kind: ModerateKind,
    certificate: Certificate,
}

/// Certification grid: 16 decades, comfortably past the required 8.
pub const CERT_LO: f64 = 1e-8;
pub const CERT_HI: f64 = 1e8;
const CERT_POINTS_PER_DECADE: usize = 16;

/// Divergence guard: no candidate in the built-in space has a doubling
/// ratio anywhere near this.
const RATIO_CAP: f64 = 1e6;

impl ModerateFn {
    /// Certify and wrap an evaluator. Rejects evaluators that are negative,
    /// decreasing, or whose doubling ratio diverges along the grid.
    pub fn new(kind: ModerateKind) -> Result<ModerateFn> {
        let sup = moderacy_ratio_kind(&kind, 2.0, &cert_grid())?;
        Ok(ModerateFn {
            kind,
            certificate: Certificate {
                beta: 2.0,
                sup_ratio: sup,
                grid_lo: CERT_LO,
                grid_hi: CERT_HI,
            },
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.kind.eval(x)
    }

    pub fn kind(&self) -> &ModerateKind {
        &self.kind
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn descriptor(&self) -> String {
        self.kind.descriptor()
    }

    /// x -> F(sqrt(x)), moderate again; the certificate is recomputed
    /// empirically rather than carried over.
    pub fn compose_sqrt(&self) -> ModerateFn {
        ModerateFn::new(ModerateKind::SqrtArg(Box::new(self.kind.clone())))
            .expect("sqrt composition of a certified moderate function")
    }

    /// Parse `pow:p` or `powlog:p,q` descriptors.
    pub fn parse(descriptor: &str) -> Result<ModerateFn> {
        let bad = |msg: String| Error::domain("moderate_descriptor", msg);
        let (head, args) = descriptor
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `name:args`, got `{descriptor}`")))?;
        let kind = match head {
            "pow" => {
                let p: f64 = args
                    .parse()
                    .map_err(|_| bad(format!("bad exponent in `{descriptor}`")))?;
                if !(p > 0.0) {
                    return Err(bad(format!("pow exponent must be > 0, got {p}")));
                }
                ModerateKind::Pow { p }
            }
            "powlog" => {
                let (ps, qs) = args
                    .split_once(',')
                    .ok_or_else(|| bad(format!("powlog needs `p,q`, got `{descriptor}`")))?;
                let p: f64 = ps
                    .parse()
                    .map_err(|_| bad(format!("bad p in `{descriptor}`")))?;
                let q: f64 = qs
                    .parse()
                    .map_err(|_| bad(format!("bad q in `{descriptor}`")))?;
                if !(p > 0.0 && q > 0.0) {
                    return Err(bad(format!("powlog exponents must be > 0, got {p},{q}")));
                }
                ModerateKind::PowLog { p, q }
            }
            other => return Err(bad(format!("unknown moderate family `{other}`"))),
        };
        ModerateFn::new(kind)
    }
}

/// Built-in catalog: the power laws plus two log-corrected powers.
pub fn catalog() -> Vec<ModerateFn> {
    let kinds = [
        ModerateKind::Pow { p: 0.5 },
        ModerateKind::Pow { p: 1.0 },
        ModerateKind::Pow { p: 2.0 },
        ModerateKind::Pow { p: 3.0 },
        ModerateKind::PowLog { p: 1.0, q: 1.0 },
        ModerateKind::PowLog { p: 2.0, q: 1.0 },
    ];
    kinds
        .into_iter()
        .map(|k| ModerateFn::new(k).expect("catalog entries are moderate"))
        .collect()
}

fn cert_grid() -> Vec<f64> {
    let decades = (CERT_HI / CERT_LO).log10();
    let n = (decades * CERT_POINTS_PER_DECADE as f64) as usize;
    (0..=n)
        .map(|i| CERT_LO * (CERT_HI / CERT_LO).powf(i as f64 / n as f64))
        .collect()
}

/// Empirical sup of F(beta x)/F(x) over a grid (0/0 := 1), rejecting
/// evaluators that are not nonnegative and nondecreasing or whose ratio
/// blows up along the grid.
pub fn moderacy_ratio<F: Fn(f64) -> f64>(f: F, beta: f64, grid: &[f64]) -> Result<f64> {
    if !(beta > 1.0) {
        return Err(Error::domain(
            "moderacy_ratio",
            format!("beta must be > 1, got {beta}"),
        ));
    }
    let mut sup: f64 = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut increasing_run = 0usize;
    let mut last_ratio = 0.0f64;
    for &x in grid {
        let v = f(x);
        let vb = f(beta * x);
        if !v.is_finite() || !vb.is_finite() {
            return Err(Error::NotModerate(format!(
                "non-finite values near x = {x}: F(x) = {v}, F(beta x) = {vb}"
            )));
        }
        if v < 0.0 {
            return Err(Error::NotModerate(format!("negative value F({x}) = {v}")));
        }
        if let Some((px, pv)) = prev {
            if v < pv {
                return Err(Error::NotModerate(format!(
                    "decreasing on the grid: F({px}) = {pv} > F({x}) = {v}"
                )));
            }
        }
        prev = Some((x, v));
        let ratio = if vb == 0.0 && v == 0.0 {
            1.0 // the 0/0 = 1 convention
        } else if v == 0.0 {
            return Err(Error::NotModerate(format!(
                "infinite ratio at x = {x}: F(x) = 0 but F(beta x) = {vb}"
            )));
        } else {
            vb / v
        };
        if ratio > last_ratio {
            increasing_run += 1;
        } else {
            increasing_run = 0;
        }
        last_ratio = ratio;
        sup = sup.max(ratio);
        if ratio > RATIO_CAP && increasing_run >= 4 {
            return Err(Error::NotModerate(format!(
                "doubling ratio diverges along the grid: {ratio:.3e} at x = {x}"
            )));
        }
    }
    Ok(sup)
}

fn moderacy_ratio_kind(kind: &ModerateKind, beta: f64, grid: &[f64]) -> Result<f64> {
    moderacy_ratio(|x| kind.eval(x), beta, grid)
}
