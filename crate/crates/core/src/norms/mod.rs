//! Exact `L²` norms of linear sparse operators and lower-bound witnesses for
//! strong and weak type norms of arbitrary ones.

mod exact;
mod witness;

pub use exact::{strong_norm_exact, MAX_TERMS};
pub use witness::{
    candidate_functions, strong_norm_witness, strong_ratio, weak_norm_witness, weak_ratio, SearchConfig,
    DEFAULT_SEED,
};

use serde::Serialize;

use crate::error::Result;
use crate::operators::Operator;
use crate::space::CellFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    StrongExact,
    StrongWitness,
    WeakWitness,
}

/// A norm value with the data needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub kind: NormKind,
    pub p: f64,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub iterations: usize,
    #[serde(skip)]
    pub witness: Option<CellFunction<f64>>,
}

impl NormEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimates always serialize")
    }

    /// Value of the stored witness recomputed from scratch; `None` for exact
    /// estimates.
    pub fn reevaluate(&self, op: &dyn Operator) -> Option<Result<f64>> {
        let f = self.witness.as_ref()?;
        Some(match self.kind {
            NormKind::StrongExact => return None,
            NormKind::StrongWitness => strong_ratio(op, f, self.p),
            NormKind::WeakWitness => weak_ratio(op, f, self.p).map(|(v, _)| v),
        })
    }
}
