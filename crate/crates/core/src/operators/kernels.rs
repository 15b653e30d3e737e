//! Pointwise evaluation of sparse-type operators.
//!
//! Every kernel walks its sets in input order and each set's cells in
//! canonical order, so results are reproducible bit for bit.

use crate::collections::MeasSet;
use crate::scalar::Scalar;
use crate::space::{sum_abs, CellFunction, DyadicSpace};

/// `Λ_𝒮 f = Σ_S ⟨f⟩_S 1_S`.
pub fn apply_sparse<T: Scalar>(sets: &[MeasSet], f: &CellFunction<T>) -> CellFunction<T> {
    let mut out = vec![T::zero(); f.values().len()];
    accumulate_sparse(sets, f.values(), &mut out);
    CellFunction::from_raw(f.space(), out)
}

pub(crate) fn accumulate_sparse<T: Scalar>(sets: &[MeasSet], f: &[T], out: &mut [T]) {
    for s in sets {
        let avg = sum_abs(f, s.cells()) / T::from_count(s.len());
        for &c in s.cells() {
            let v = &mut out[c as usize];
            *v = v.clone() + avg.clone();
        }
    }
}

/// `𝓜_𝔅 f = sup_B ⟨f⟩_B 1_B`, zero off the union of `𝔅`.
pub fn apply_maximal<T: Scalar>(sets: &[MeasSet], f: &CellFunction<T>) -> CellFunction<T> {
    let mut out = vec![T::zero(); f.values().len()];
    for s in sets {
        let avg = sum_abs(f.values(), s.cells()) / T::from_count(s.len());
        for &c in s.cells() {
            let v = &mut out[c as usize];
            if avg > *v {
                *v = avg.clone();
            }
        }
    }
    CellFunction::from_raw(f.space(), out)
}

/// `Σ_{S ⊆ R_0} 1_S`; `None` stands for `R_0 = X`, where every set counts.
pub fn overlap_function(sets: &[MeasSet], r0: Option<&MeasSet>, space: DyadicSpace) -> CellFunction<f64> {
    let mut out = vec![0.0; space.cell_count()];
    for s in sets {
        if r0.is_none_or(|r| s.is_subset(r)) {
            for &c in s.cells() {
                out[c as usize] += 1.0;
            }
        }
    }
    CellFunction::from_raw(space, out)
}
