//! Process catalog: each family is one diffusion with validated parameters.
//!
//! State is either a real scalar or a complex point. For path purposes the
//! *observed* value is what gets stored in skeletons: the signed state for
//! real recurrent families, the absolute value for the reflected family, the
//! clamped nonnegative value for square-root diffusions under Euler, and the
//! modulus for complex families.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Internal simulation state. Real families carry one coordinate, complex
/// families two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum State {
    Real(f64),
    Complex(f64, f64),
}

impl State {
    pub fn real(self) -> f64 {
        match self {
            State::Real(x) => x,
            State::Complex(..) => panic!("complex state where real expected"),
        }
    }

    pub fn modulus(self) -> f64 {
        match self {
            State::Real(x) => x.abs(),
            State::Complex(re, im) => re.hypot(im),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// dX = -alpha X dt + dB
    Ou { alpha: f64 },
    /// dX = -mu dt + dB (constant downward drift, signed state)
    BmDrift { mu: f64 },
    /// dX = -mu sign(X) dt + dB; observed value is |X|
    ReflectedBmDrift { mu: f64 },
    /// dX = (a + b X) dt + c sqrt(X) dB, with a, c > 0 and b < 0
    Cir { a: f64, b: f64, c: f64 },
    /// dX = alpha dt + 2 sqrt(X) dB
    Besq { alpha: f64 },
    /// square root of Besq(alpha)
    Bessel { alpha: f64 },
    /// square root of Cir(alpha, -2 beta, 2)
    RadialOu { alpha: f64, beta: f64 },
    /// dZ = -(a + i b) Z dt + dW, complex W
    ComplexOu { a: f64, b: f64 },
    /// complex Brownian motion
    ComplexBm,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ou { .. } => "ou",
            Family::BmDrift { .. } => "bm_drift",
            Family::ReflectedBmDrift { .. } => "reflected_bm_drift",
            Family::Cir { .. } => "cir",
            Family::Besq { .. } => "besq",
            Family::Bessel { .. } => "bessel",
            Family::RadialOu { .. } => "radial_ou",
            Family::ComplexOu { .. } => "complex_ou",
            Family::ComplexBm => "complex_bm",
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Family::ComplexOu { .. } | Family::ComplexBm)
    }

    /// Families whose observed values are nonnegative by construction.
    pub fn is_nonnegative(&self) -> bool {
        matches!(
            self,
            Family::Cir { .. }
                | Family::Besq { .. }
                | Family::Bessel { .. }
                | Family::RadialOu { .. }
                | Family::ReflectedBmDrift { .. }
        ) || self.is_complex()
    }

    fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: f64, what: &str| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("{what} must be finite and > 0, got {v}"),
                ))
            }
        };
        match *self {
            Family::Ou { alpha } => pos("ou", alpha, "rate alpha"),
            Family::BmDrift { mu } => pos("bm_drift", mu, "drift mu"),
            Family::ReflectedBmDrift { mu } => pos("reflected_bm_drift", mu, "drift mu"),
            Family::Cir { a, b, c } => {
                pos("cir", a, "level a")?;
                pos("cir", c, "volatility c")?;
                if b.is_finite() && b < 0.0 {
                    Ok(())
                } else {
                    Err(Error::param(
                        "cir",
                        format!("rate b must satisfy b < 0 (mean reversion), got {b}"),
                    ))
                }
            }
            Family::Besq { alpha } => pos("besq", alpha, "dimension alpha"),
            Family::Bessel { alpha } => pos("bessel", alpha, "dimension alpha"),
            Family::RadialOu { alpha, beta } => {
                pos("radial_ou", alpha, "dimension alpha")?;
                pos("radial_ou", beta, "rate beta")
            }
            Family::ComplexOu { a, b } => {
                pos("complex_ou", a, "rate a")?;
                if b.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param(
                        "complex_ou",
                        format!("rotation b must be finite, got {b}"),
                    ))
                }
            }
            Family::ComplexBm => Ok(()),
        }
    }

    /// Drift coefficient of the one-dimensional families.
    pub fn drift(&self, x: f64) -> f64 {
        match *self {
            Family::Ou { alpha } => -alpha * x,
            Family::BmDrift { mu } => -mu,
            Family::ReflectedBmDrift { mu } => -mu * sign0(x),
            Family::Cir { a, b, .. } => a + b * x,
            Family::Besq { alpha } => alpha,
            Family::Bessel { alpha } => (alpha - 1.0) / (2.0 * x),
            Family::RadialOu { alpha, beta } => (alpha - 1.0) / (2.0 * x) - beta * x,
            Family::ComplexOu { .. } | Family::ComplexBm => {
                panic!("scalar drift undefined for complex families")
            }
        }
    }

    /// Diffusion coefficient of the one-dimensional families.
    pub fn diffusion(&self, x: f64) -> f64 {
        match *self {
            Family::Ou { .. } | Family::BmDrift { .. } | Family::ReflectedBmDrift { .. } => 1.0,
            Family::Cir { c, .. } => c * x.max(0.0).sqrt(),
            Family::Besq { .. } => 2.0 * x.max(0.0).sqrt(),
            Family::Bessel { .. } | Family::RadialOu { .. } => 1.0,
            Family::ComplexOu { .. } | Family::ComplexBm => {
                panic!("scalar diffusion undefined for complex families")
            }
        }
    }
}

/// sign with the convention sign(0) = 0 (null set for the reflected SDE,
/// any fixed choice yields the same law).
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A validated process description: family plus starting state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProcessSpec {
    family: Family,
    x0: State,
}

impl ProcessSpec {
    /// Process started at the origin.
    pub fn new(family: Family) -> Result<Self> {
        let x0 = if family.is_complex() {
            State::Complex(0.0, 0.0)
        } else {
            State::Real(0.0)
        };
        Self::with_start(family, x0)
    }

    pub fn with_start(family: Family, x0: State) -> Result<Self> {
        family.validate()?;
        match (family.is_complex(), x0) {
            (true, State::Real(_)) => {
                return Err(Error::param(
                    family.name(),
                    "complex family needs a complex start",
                ))
            }
            (false, State::Complex(..)) => {
                return Err(Error::param(
                    family.name(),
                    "real family needs a real start",
                ))
            }
            (false, State::Real(x)) => {
                let needs_nonneg = matches!(
                    family,
                    Family::Cir { .. }
                        | Family::Besq { .. }
                        | Family::Bessel { .. }
                        | Family::RadialOu { .. }
                );
                if needs_nonneg && !(x >= 0.0) {
                    return Err(Error::param(
                        family.name(),
                        format!("start must be >= 0, got {x}"),
                    ));
                }
                if !x.is_finite() {
                    return Err(Error::param(family.name(), "start must be finite"));
                }
            }
            (true, State::Complex(re, im)) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::param(family.name(), "start must be finite"));
                }
            }
        }
        Ok(ProcessSpec { family, x0 })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn x0(&self) -> State {
        self.x0
    }

    /// Value stored in path skeletons for a given simulation state.
    pub fn observe(&self, s: State) -> f64 {
        match self.family {
            Family::Ou { .. } | Family::BmDrift { .. } => s.real(),
            Family::ReflectedBmDrift { .. } => s.real().abs(),
            // Euler states of square-root diffusions may dip below zero
            // (full truncation); stored values are clamped.
            Family::Cir { .. } | Family::Besq { .. } => s.real().max(0.0),
            Family::Bessel { .. } | Family::RadialOu { .. } => s.real(),
            Family::ComplexOu { .. } | Family::ComplexBm => s.modulus(),
        }
    }
}
