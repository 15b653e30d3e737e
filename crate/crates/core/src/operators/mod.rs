//! Sparse, maximal, maximal-sparse and α-sparse operators.

mod family;
mod kernels;
mod linearize;

pub use family::{apply_alpha_sparse, apply_each, apply_max_sparse, AlphaSpec, OperatorFamily};
pub use kernels::{apply_maximal, apply_sparse, overlap_function};
pub use linearize::{level_cover_constant, linearize, verify_level_cover, LevelCoverReport, LinearizationPartition};

use crate::collections::MeasSet;
use crate::space::{CellFunction, DyadicSpace};

/// A positive operator on cell functions of one space.
pub trait Operator: Sync {
    fn space(&self) -> DyadicSpace;

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64>;

    /// `(source, target)` pairs when the operator is `f ↦ Σ_i ⟨f⟩_{src_i} 1_{tgt_i}`.
    fn linear_terms(&self) -> Option<Vec<(&MeasSet, &MeasSet)>> {
        None
    }

    /// Sets whose indicators are natural test functions.
    fn candidate_sets(&self) -> Vec<&MeasSet> {
        Vec::new()
    }
}

/// `Λ_𝒮` over a fixed list of sets.
#[derive(Debug, Clone, Copy)]
pub struct SparseOp<'a> {
    pub space: DyadicSpace,
    pub sets: &'a [MeasSet],
}

impl Operator for SparseOp<'_> {
    fn space(&self) -> DyadicSpace {
        self.space
    }

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64> {
        apply_sparse(self.sets, f)
    }

    fn linear_terms(&self) -> Option<Vec<(&MeasSet, &MeasSet)>> {
        Some(self.sets.iter().map(|s| (s, s)).collect())
    }

    fn candidate_sets(&self) -> Vec<&MeasSet> {
        self.sets.iter().collect()
    }
}

/// `𝓜_𝔅`.
#[derive(Debug, Clone, Copy)]
pub struct MaximalOp<'a> {
    pub space: DyadicSpace,
    pub sets: &'a [MeasSet],
}

impl Operator for MaximalOp<'_> {
    fn space(&self) -> DyadicSpace {
        self.space
    }

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64> {
        apply_maximal(self.sets, f)
    }

    fn candidate_sets(&self) -> Vec<&MeasSet> {
        self.sets.iter().collect()
    }
}

/// `Λ_𝔊`.
#[derive(Debug, Clone, Copy)]
pub struct MaxSparseOp<'a> {
    pub space: DyadicSpace,
    pub family: &'a OperatorFamily,
}

impl Operator for MaxSparseOp<'_> {
    fn space(&self) -> DyadicSpace {
        self.space
    }

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64> {
        apply_max_sparse(self.family, f)
    }

    fn linear_terms(&self) -> Option<Vec<(&MeasSet, &MeasSet)>> {
        match self.family.collections() {
            [one] => Some(one.sets().iter().map(|s| (s, s)).collect()),
            _ => None,
        }
    }

    fn candidate_sets(&self) -> Vec<&MeasSet> {
        self.family.union().iter().collect()
    }
}

/// `Λ^α_{𝒮,𝒮'}`; linear when `α = 1`.
#[derive(Debug, Clone, Copy)]
pub struct AlphaOp<'a> {
    pub space: DyadicSpace,
    pub spec: &'a AlphaSpec,
}

impl Operator for AlphaOp<'_> {
    fn space(&self) -> DyadicSpace {
        self.space
    }

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64> {
        apply_alpha_sparse(self.spec, f)
    }

    fn linear_terms(&self) -> Option<Vec<(&MeasSet, &MeasSet)>> {
        (self.spec.alpha() == 1.0).then(|| self.spec.pairs().collect())
    }

    fn candidate_sets(&self) -> Vec<&MeasSet> {
        self.spec.base().sets().iter().collect()
    }
}
