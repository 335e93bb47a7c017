//! Growth functions, scale functions, the good-lambda control ratio, and
//! the numerically certified inequality checks between them.

pub mod fmu;
pub mod growth;
pub mod phi;
pub mod quad;
pub mod residual;
pub mod root;
pub mod sandwich;
pub mod scale;

pub use growth::{Growth, GrowthKind};
pub use phi::{compute_phi, LambdaGrid};
pub use residual::generator_residual;
pub use sandwich::{
    bm_drift_g_sandwich, cir_f_sandwich, log_grid, ou_inverse_growth, SandwichOutcome, SLACK_TOL,
};
pub use scale::{Scale, ScaleKind};
