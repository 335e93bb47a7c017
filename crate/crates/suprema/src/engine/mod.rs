//! Sample-path engine: exact transition laws, Euler fallback, and
//! discretized skeletons with running maxima and hitting records.

pub mod euler;
pub mod exact;
pub mod path;
pub mod stepper;

pub use euler::euler_step;
pub use exact::{besq_transition, cir_transition, sample_transition, Law, Transition};
pub use path::{
    besq_additivity_pair, simulate_path, GridPolicy, HitRecord, PathSkeleton, Resolution, Scheme,
    StoppingRule,
};
pub use stepper::Stepper;
