use rayon::prelude::*;

use crate::collections::{verify_laminar, MeasSet, SparseCollection};
use crate::error::{Error, Result};
use crate::operators::kernels::{accumulate_sparse, apply_sparse};
use crate::scalar::Scalar;
use crate::space::{sum_abs, CellFunction};

/// `𝔊 = (𝒮_1, …, 𝒮_N)` together with the deduplicated union `𝒮`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorFamily {
    collections: Vec<SparseCollection>,
    union: Vec<MeasSet>,
}

impl OperatorFamily {
    pub fn new(collections: Vec<SparseCollection>) -> Result<Self> {
        if collections.is_empty() {
            return Err(Error::domain("an operator family needs at least one collection"));
        }
        let mut seen = std::collections::HashSet::new();
        let mut union = Vec::new();
        for c in &collections {
            for s in c.sets() {
                if seen.insert(s) {
                    union.push(s.clone());
                }
            }
        }
        Ok(OperatorFamily { collections, union })
    }

    pub fn collections(&self) -> &[SparseCollection] {
        &self.collections
    }

    pub fn len(&self) -> usize {
        self.collections.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `𝒮 = ∪_k 𝒮_k`, first occurrence order.
    pub fn union(&self) -> &[MeasSet] {
        &self.union
    }
}

/// `Λ_𝔊 f = max_k Λ_{𝒮_k} f`.
pub fn apply_max_sparse<T: Scalar>(family: &OperatorFamily, f: &CellFunction<T>) -> CellFunction<T> {
    let n = f.values().len();
    let zeros = || vec![T::zero(); n];
    let out = family
        .collections
        .par_iter()
        .fold(
            || (zeros(), zeros()),
            |(mut out, mut buf), c| {
                accumulate_sparse(c.sets(), f.values(), &mut buf);
                for s in c.sets() {
                    for &x in s.cells() {
                        let x = x as usize;
                        if buf[x] > out[x] {
                            out[x] = buf[x].clone();
                        }
                        buf[x] = T::zero();
                    }
                }
                (out, buf)
            },
        )
        .map(|(out, _)| out)
        .reduce(zeros, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                if y > *x {
                    *x = y;
                }
            }
            a
        });
    CellFunction::from_raw(f.space(), out)
}

/// Per-collection outputs `Λ_{𝒮_k} f`, in family order.
pub fn apply_each<T: Scalar>(family: &OperatorFamily, f: &CellFunction<T>) -> Vec<CellFunction<T>> {
    family
        .collections
        .par_iter()
        .map(|c| apply_sparse(c.sets(), f))
        .collect()
}

/// `Λ^α f = (Σ_R ⟨f⟩_R^α 1_{G(R)})^{1/α}` with `G(R) ⊆ R`, `μ(G(R)) ≤ δ μ(R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSpec {
    base: SparseCollection,
    /// `G(R)` for each member of `base`, in the same order; `None` is empty.
    images: Vec<Option<MeasSet>>,
    alpha: f64,
    delta: f64,
}

impl AlphaSpec {
    pub fn new(base: SparseCollection, images: Vec<Option<MeasSet>>, alpha: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::domain(format!("delta must lie in (0,1], got {delta}")));
        }
        if images.len() != base.len() {
            return Err(Error::domain("one image per member is required"));
        }
        for (i, (r, g)) in base.sets().iter().zip(&images).enumerate() {
            if let Some(g) = g {
                if !g.is_subset(r) {
                    return Err(Error::domain(format!("G(R) is not inside R for member #{i}")));
                }
                if g.len() as f64 > delta * r.len() as f64 {
                    return Err(Error::domain(format!("μ(G(R)) exceeds δ μ(R) for member #{i}")));
                }
            }
        }
        let mut distinct: Vec<MeasSet> = Vec::new();
        for g in images.iter().flatten() {
            if !distinct.contains(g) {
                distinct.push(g.clone());
            }
        }
        verify_laminar(distinct)?;
        Ok(AlphaSpec {
            base,
            images,
            alpha,
            delta,
        })
    }

    /// `G = id`, `δ = 1`.
    pub fn identity(base: SparseCollection, alpha: f64) -> Result<Self> {
        let images = base.sets().iter().cloned().map(Some).collect();
        AlphaSpec::new(base, images, alpha, 1.0)
    }

    pub fn base(&self) -> &SparseCollection {
        &self.base
    }

    pub fn images(&self) -> &[Option<MeasSet>] {
        &self.images
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `(R, G(R))` pairs with nonempty image.
    pub fn pairs(&self) -> impl Iterator<Item = (&MeasSet, &MeasSet)> {
        self.base
            .sets()
            .iter()
            .zip(&self.images)
            .filter_map(|(r, g)| g.as_ref().map(|g| (r, g)))
    }
}

pub fn apply_alpha_sparse<T: Scalar>(spec: &AlphaSpec, f: &CellFunction<T>) -> CellFunction<T> {
    let mut out = vec![T::zero(); f.values().len()];
    for (r, g) in spec.pairs() {
        let avg = (sum_abs(f.values(), r.cells()) / T::from_count(r.len())).powf(spec.alpha);
        for &c in g.cells() {
            let v = &mut out[c as usize];
            *v = v.clone() + avg.clone();
        }
    }
    if spec.alpha != 1.0 {
        let inv = 1.0 / spec.alpha;
        for v in &mut out {
            *v = v.powf(inv);
        }
    }
    CellFunction::from_raw(f.space(), out)
}
