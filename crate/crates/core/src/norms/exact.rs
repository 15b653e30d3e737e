use nalgebra::{DMatrix, SymmetricEigen};

use crate::collections::MeasSet;
use crate::error::{Error, Result};
use crate::norms::{NormEstimate, NormKind};
use crate::operators::Operator;

/// Largest number of terms accepted by [`strong_norm_exact`].
pub const MAX_TERMS: usize = 1 << 12;

/// `‖T‖_{L²→L²}` for `T f = Σ_i ⟨f⟩_{src_i} 1_{tgt_i}`.
///
/// With `P_ij = |tgt_i ∩ tgt_j|` and `Q_ij = |src_i ∩ src_j| / (|src_i| |src_j|)`
/// (both Gram matrices), `‖T‖² = λ_max(Q^{1/2} P Q^{1/2})`, so the work is
/// cubic in the number of terms instead of the number of cells.
pub fn strong_norm_exact(op: &dyn Operator, p: f64) -> Result<NormEstimate> {
    if p != 2.0 {
        return Err(Error::Unsupported(format!("exact norms are available for p = 2 only, got {p}")));
    }
    let terms = op
        .linear_terms()
        .ok_or_else(|| Error::Unsupported("operator is not linear".into()))?;
    if terms.len() > MAX_TERMS {
        return Err(Error::Unsupported(format!(
            "{} terms exceed the limit of {MAX_TERMS}",
            terms.len()
        )));
    }
    Ok(NormEstimate {
        kind: NormKind::StrongExact,
        p,
        value: gram_norm(&terms),
        lambda: None,
        seed: None,
        iterations: 0,
        witness: None,
    })
}

pub(crate) fn gram_norm(terms: &[(&MeasSet, &MeasSet)]) -> f64 {
    let n = terms.len();
    if n == 0 {
        return 0.0;
    }
    let mut pm = DMatrix::<f64>::zeros(n, n);
    let mut qm = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = terms[i].1.intersection_len(terms[j].1) as f64;
            let (si, sj) = (terms[i].0, terms[j].0);
            let s = si.intersection_len(sj) as f64 / (si.len() as f64 * sj.len() as f64);
            pm[(i, j)] = t;
            pm[(j, i)] = t;
            qm[(i, j)] = s;
            qm[(j, i)] = s;
        }
    }
    let eq = SymmetricEigen::new(qm);
    let root = DMatrix::from_diagonal(&eq.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let half = &eq.eigenvectors * root * eq.eigenvectors.transpose();
    let m = &half * pm * &half;
    let sym = (&m + m.transpose()) * 0.5;
    let top = SymmetricEigen::new(sym).eigenvalues.max();
    top.max(0.0).sqrt()
}
