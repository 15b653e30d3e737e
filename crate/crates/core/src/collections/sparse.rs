//! Sparsity certificates for laminar families.
//!
//! For a laminar family, disjoint portions `E_S ⊆ S` with `μ(E_S) ≥ γ μ(S)`
//! exist exactly when `γ Σ_{S ⊆ R} μ(S) ≤ μ(R)` for every member `R`: fill
//! portions bottom-up, and each `R` still has `μ(R) − γ Σ_{S ⊊ R} μ(S)` free.
//! So the best constant is `γ_max = min_R μ(R) / Σ_{S ⊆ R} μ(S)`, the
//! reciprocal of the Carleson constant.
//!
//! Portions may need fractions of a cell (the tower `[0,1) ⊃ [0,1/2) ⊃ [0,1/4)`
//! has `γ_max = 4/7`). A [`Portion`] therefore records, per cell, how many of
//! the cell's `units_per_cell` equal sub-pieces it owns.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::collections::{verify_laminar, MartingaleCollection, MeasSet};
use crate::error::{Error, Result};
use crate::space::DyadicSpace;

/// Exact sparsity constants are ratios of cell counts.
pub type Gamma = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portion {
    units_per_cell: u128,
    pieces: Vec<(u32, u128)>,
}

impl Portion {
    pub fn units_per_cell(&self) -> u128 {
        self.units_per_cell
    }

    /// `(cell, units)` pairs, cells ascending.
    pub fn pieces(&self) -> &[(u32, u128)] {
        &self.pieces
    }

    pub fn total_units(&self) -> u128 {
        self.pieces.iter().map(|&(_, u)| u).sum()
    }

    /// Measure in cells, as an exact fraction `total_units / units_per_cell`.
    pub fn cell_fraction(&self) -> (u128, u128) {
        (self.total_units(), self.units_per_cell)
    }

    pub fn measure(&self, space: &DyadicSpace) -> f64 {
        self.total_units() as f64 / self.units_per_cell as f64 * space.cell_measure()
    }
}

/// A laminar family with its exact sparsity constant. Portions are derived
/// on first use.
#[derive(Debug, Clone)]
pub struct SparseCollection {
    laminar: MartingaleCollection,
    gamma: Gamma,
    portions: OnceLock<Vec<Portion>>,
}

impl PartialEq for SparseCollection {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.laminar == other.laminar
    }
}

impl SparseCollection {
    /// Certifies a laminar family at its best sparsity constant.
    pub fn certify(laminar: MartingaleCollection) -> Self {
        SparseCollection {
            gamma: sparsity_constant(&laminar),
            laminar,
            portions: OnceLock::new(),
        }
    }

    pub fn from_sets(sets: Vec<MeasSet>) -> Result<Self> {
        Ok(SparseCollection::certify(verify_laminar(sets)?))
    }

    /// Like [`SparseCollection::from_sets`] but fails when `γ_max < target`.
    pub fn with_target(sets: Vec<MeasSet>, target: f64) -> Result<Self> {
        let c = SparseCollection::from_sets(sets)?;
        if gamma_to_f64(c.gamma) < target {
            return Err(Error::construction(format!(
                "sparsity {} is below the target {target}",
                c.gamma
            )));
        }
        Ok(c)
    }

    pub fn empty() -> Self {
        SparseCollection::certify(MartingaleCollection::empty())
    }

    #[inline]
    pub fn laminar(&self) -> &MartingaleCollection {
        &self.laminar
    }

    #[inline]
    pub fn sets(&self) -> &[MeasSet] {
        self.laminar.sets()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.laminar.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.laminar.is_empty()
    }

    /// The certified constant `γ_max`.
    #[inline]
    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn gamma_f64(&self) -> f64 {
        gamma_to_f64(self.gamma)
    }

    pub fn portions(&self) -> &[Portion] {
        self.portions.get_or_init(|| assign_portions(&self.laminar, self.gamma))
    }

    /// Checks `E_S ⊆ S`, `μ(E_S) ≥ γ μ(S)` and pairwise disjointness exactly.
    pub fn verify_portions(&self) -> bool {
        let (a, b) = (*self.gamma.numer() as u128, *self.gamma.denom() as u128);
        let mut used: std::collections::HashMap<u32, u128> = Default::default();
        for (set, portion) in self.sets().iter().zip(self.portions()) {
            let upc = portion.units_per_cell;
            if portion.pieces.iter().any(|&(c, u)| !set.contains(c) || u > upc) {
                return false;
            }
            // total/upc ≥ (a/b)|S|
            if portion.total_units() * b < a * set.len() as u128 * upc {
                return false;
            }
            for &(c, u) in &portion.pieces {
                let e = used.entry(c).or_insert(0);
                *e += u;
                if *e > upc {
                    return false;
                }
            }
        }
        true
    }

    pub fn into_laminar(self) -> MartingaleCollection {
        self.laminar
    }

    /// `𝒮_j(R)` for the member `R`.
    pub fn generations(&self, r: &MeasSet, j: usize) -> Result<Vec<&MeasSet>> {
        generations(&self.laminar, r, j)
    }

    pub fn generation_union(&self, space: &DyadicSpace, r: &MeasSet, j: usize) -> Result<Option<MeasSet>> {
        generation_union(&self.laminar, space, r, j)
    }
}

pub fn gamma_to_f64(g: Gamma) -> f64 {
    *g.numer() as f64 / *g.denom() as f64
}

/// Best sparsity constant of a laminar family and portions attaining it.
///
/// The empty family is vacuously sparse with constant 1.
pub fn max_sparsity(collection: &MartingaleCollection) -> (Gamma, Vec<Portion>) {
    let gamma = sparsity_constant(collection);
    (gamma, assign_portions(collection, gamma))
}

/// `γ_max` alone.
pub fn sparsity_constant(collection: &MartingaleCollection) -> Gamma {
    if collection.is_empty() {
        return Gamma::new(1, 1);
    }
    let sums = collection.subtree_cell_sums();
    let mut best = (1u64, 1u64);
    for (i, &sum) in sums.iter().enumerate() {
        let size = collection.set(i).len() as u64;
        if (size as u128) * (best.1 as u128) < (best.0 as u128) * (sum as u128) {
            best = (size, sum);
        }
    }
    Gamma::new(best.0, best.1)
}

/// Bottom-up greedy fill: children take their share before their parents.
fn assign_portions(collection: &MartingaleCollection, gamma: Gamma) -> Vec<Portion> {
    let (a, b) = (*gamma.numer() as u128, *gamma.denom() as u128);
    let mut free: std::collections::HashMap<u32, u128> = Default::default();
    let mut portions = vec![
        Portion {
            units_per_cell: b,
            pieces: Vec::new()
        };
        collection.len()
    ];
    for &i in collection.top_down().iter().rev() {
        let set = collection.set(i);
        let mut need = a * set.len() as u128;
        let mut pieces = Vec::new();
        for &c in set.cells() {
            if need == 0 {
                break;
            }
            let left = free.entry(c).or_insert(b);
            let take = (*left).min(need);
            if take > 0 {
                *left -= take;
                need -= take;
                pieces.push((c, take));
            }
        }
        debug_assert_eq!(need, 0, "greedy fill cannot run short at γ_max");
        portions[i].pieces = pieces;
    }
    portions
}

/// `max_R Σ_{S ⊆ R} μ(S) / μ(R)`; 1 for the empty family.
pub fn carleson_constant(collection: &MartingaleCollection) -> Gamma {
    let sums = collection.subtree_cell_sums();
    let mut best = Gamma::new(1, 1);
    for (i, &sum) in sums.iter().enumerate() {
        let r = Gamma::new(sum, collection.set(i).len() as u64);
        if r > best {
            best = r;
        }
    }
    best
}

/// `max_R μ(G_1(R)) / μ(R)`: the per-generation shrink factor of the family.
pub fn nesting_ratio(collection: &MartingaleCollection) -> Gamma {
    let mut best = Gamma::new(0, 1);
    for i in 0..collection.len() {
        let child: u64 = collection
            .children(i)
            .iter()
            .map(|&c| collection.set(c).len() as u64)
            .sum();
        let r = Gamma::new(child, collection.set(i).len() as u64);
        if r > best {
            best = r;
        }
    }
    best
}

/// `𝒮_0(R) = {R}`; `𝒮_{j+1}(R)` are the maximal members inside `R` not yet
/// used. In a laminar family without duplicates these are the nodes `j`
/// levels below `R` in the inclusion forest.
pub fn generations<'a>(
    collection: &'a MartingaleCollection,
    r: &MeasSet,
    j: usize,
) -> Result<Vec<&'a MeasSet>> {
    let root = collection
        .index_of(r)
        .ok_or_else(|| Error::domain("R is not a member of the collection"))?;
    Ok(generation_indices(collection, root, j)
        .into_iter()
        .map(|i| collection.set(i))
        .collect())
}

pub fn generation_indices(collection: &MartingaleCollection, root: usize, j: usize) -> Vec<usize> {
    let mut level = vec![root];
    for _ in 0..j {
        level = level
            .iter()
            .flat_map(|&i| collection.children(i).iter().copied())
            .collect();
        if level.is_empty() {
            break;
        }
    }
    level
}

/// `G_j(R)`, the union of the j-th generation; `None` when it is empty.
pub fn generation_union(
    collection: &MartingaleCollection,
    space: &DyadicSpace,
    r: &MeasSet,
    j: usize,
) -> Result<Option<MeasSet>> {
    let gen = generations(collection, r, j)?;
    Ok(MeasSet::union_of(space, gen))
}

/// Cell count of `G_j(R)` for the member with index `root`.
pub fn generation_cells(collection: &MartingaleCollection, root: usize, j: usize) -> usize {
    generation_indices(collection, root, j)
        .into_iter()
        .map(|i| collection.set(i).len())
        .sum()
}
