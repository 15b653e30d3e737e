//! Sparse, maximal and directional operators on dyadic cell spaces, with
//! exact rational oracles, norm estimates and reproducible experiments.

pub mod collections;
pub mod directional;
pub mod error;
pub mod experiments;
pub mod norms;
pub mod operators;
pub mod oracle;
pub mod scalar;
pub mod space;

pub use collections::{MartingaleCollection, MeasSet, SparseCollection};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use space::{build_space, CellFunction, DyadicSpace};
