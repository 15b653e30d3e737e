//! Reproducible studies built on the operators and norms.

mod directional;
mod domination;
pub mod fixtures;
mod lemma;
mod report;
mod scaling;
mod sharpness;
mod tail;
mod verify;

pub use directional::directional_experiment;
pub use domination::domination_experiment;
pub use lemma::{delta_exponent, fit_slope, lemma_delta_experiment, lemma_operator};
pub use report::{format_real, ExperimentReport, Fields, Value};
pub use scaling::{build_ensemble, scaling_experiment, scaling_search, Ensemble, SHEAR_DENSITY};
pub use sharpness::{sharpness_construction, sharpness_depth, sharpness_experiment, Sharpness};
pub use tail::{tail_experiment, tail_point, TailPoint};
pub use verify::{verify_suite, VERIFY_MAX_CELLS};
