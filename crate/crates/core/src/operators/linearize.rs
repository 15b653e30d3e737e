use crate::collections::{log_plus, stratify_by_average, MeasSet};
use crate::error::{Error, Result};
use crate::operators::family::{apply_each, apply_max_sparse, OperatorFamily};
use crate::scalar::Scalar;
use crate::space::{sum_abs, CellFunction, DyadicSpace};

/// `E_1, …, E_N`: cell `x` belongs to the smallest `k` attaining
/// `max_j Λ_{𝒮_j} f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationPartition {
    space: DyadicSpace,
    owner: Vec<usize>,
    count: usize,
}

impl LinearizationPartition {
    /// Index `k` of the piece containing each cell.
    pub fn owner(&self) -> &[usize] {
        &self.owner
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// `E_k`, `None` when empty.
    pub fn piece(&self, k: usize) -> Option<MeasSet> {
        let cells: Vec<u32> = (0..self.owner.len() as u32)
            .filter(|&c| self.owner[c as usize] == k)
            .collect();
        (!cells.is_empty()).then(|| MeasSet::new(&self.space, cells).expect("valid cells"))
    }

    /// `E_{k,R} = E_k ∩ R` as a cell list.
    pub fn trace(&self, k: usize, r: &MeasSet) -> Vec<u32> {
        r.cells().iter().copied().filter(|&c| self.owner[c as usize] == k).collect()
    }

    /// `Σ_k Σ_{R ∈ 𝒮_k} ⟨f⟩_R 1_{E_{k,R}}`.
    pub fn reconstruct<T: Scalar>(&self, family: &OperatorFamily, f: &CellFunction<T>) -> CellFunction<T> {
        let mut out = vec![T::zero(); f.values().len()];
        for (k, c) in family.collections().iter().enumerate() {
            for r in c.sets() {
                let avg = sum_abs(f.values(), r.cells()) / T::from_count(r.len());
                for &x in r.cells() {
                    if self.owner[x as usize] == k {
                        let v = &mut out[x as usize];
                        *v = v.clone() + avg.clone();
                    }
                }
            }
        }
        CellFunction::from_raw(f.space(), out)
    }
}

pub fn linearize<T: Scalar>(family: &OperatorFamily, f: &CellFunction<T>) -> LinearizationPartition {
    let parts = apply_each(family, f);
    let n = f.values().len();
    let mut owner = vec![0usize; n];
    for x in 0..n {
        let mut best = 0;
        for k in 1..parts.len() {
            if parts[k].values()[x] > parts[best].values()[x] {
                best = k;
            }
        }
        owner[x] = best;
    }
    LinearizationPartition {
        space: f.space(),
        owner,
        count: family.len(),
    }
}

/// The constant `c = 1 − 2^{-1/2}`.
pub fn level_cover_constant() -> f64 {
    1.0 - std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelCoverReport {
    pub lambda: f64,
    pub delta: f64,
    /// Cells of `{Λ_𝔊 f > λ}`.
    pub level_cells: usize,
    /// Cells of the covering union.
    pub cover_cells: usize,
    /// Level-set cells outside the covering union.
    pub uncovered: Vec<u32>,
}

impl LevelCoverReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Checks `{Λ_𝔊 f > λ}` against the union of the bucket-0 sets and the
/// sets `{Σ_{R ∈ 𝒮_{k,s}} 1_R > c 2^{s/2-1} log_+N / δ}`, `s ≥ 1`.
pub fn verify_level_cover(
    family: &OperatorFamily,
    f: &CellFunction<f64>,
    lambda: f64,
    delta: f64,
) -> Result<LevelCoverReport> {
    if !(lambda > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("need λ > 0 and 0 < δ < 1 (got λ={lambda}, δ={delta})")));
    }
    let n = family.len();
    let cells = f.values().len();
    let c = level_cover_constant();
    let log_n = log_plus(n);
    let mut covered = vec![false; cells];
    let mut count = vec![0u32; cells];
    for coll in family.collections() {
        let st = stratify_by_average(coll.sets(), f, lambda, delta, n)?;
        for (&s, members) in &st.buckets {
            if s == 0 {
                for &i in members {
                    for &x in coll.sets()[i].cells() {
                        covered[x as usize] = true;
                    }
                }
                continue;
            }
            let bar = c * 2f64.powf(s as f64 / 2.0 - 1.0) * log_n / delta;
            let mut touched = Vec::new();
            for &i in members {
                for &x in coll.sets()[i].cells() {
                    if count[x as usize] == 0 {
                        touched.push(x);
                    }
                    count[x as usize] += 1;
                }
            }
            for x in touched {
                if count[x as usize] as f64 > bar {
                    covered[x as usize] = true;
                }
                count[x as usize] = 0;
            }
        }
    }
    let g = apply_max_sparse(family, f);
    let level: Vec<u32> = (0..cells as u32).filter(|&x| g.values()[x as usize] > lambda).collect();
    let uncovered = level.iter().copied().filter(|&x| !covered[x as usize]).collect();
    Ok(LevelCoverReport {
        lambda,
        delta,
        level_cells: level.len(),
        cover_cells: covered.iter().filter(|&&b| b).count(),
        uncovered,
    })
}
