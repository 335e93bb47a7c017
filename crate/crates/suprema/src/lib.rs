//! Monte Carlo engine and numerical certification harness for growth
//! envelopes of the running maximum of diffusion processes.
//!
//! The crate has five layers:
//!
//! * [`process`] / [`engine`] — the family catalog, exact transition
//!   samplers, Euler fallback, and path skeletons with running maxima;
//! * [`analytic`] — growth functions g, scale functions f (Lf = 1),
//!   their inverses, sandwich brackets, and the good-lambda control ratio;
//! * [`moderate`] — the moderate-function catalog with empirical
//!   doubling-ratio certificates;
//! * [`montecarlo`] — estimators for E F(X*) at deterministic and hitting
//!   times, tail probabilities, and ratio envelopes with confidence bands;
//! * [`verify`] — executable checks (controllability, good-lambda,
//!   two-sided envelopes, L^p bounds, distribution identities, conformal
//!   scenarios) producing serializable reports.

pub mod analytic;
pub mod engine;
pub mod error;
pub mod moderate;
pub mod montecarlo;
pub mod process;
pub mod rng;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use process::{Family, ProcessSpec, State};
pub use rng::Streams;
