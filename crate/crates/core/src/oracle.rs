//! Direct-definition evaluators in exact rational arithmetic.
//!
//! These loop over cells and sets literally, measure everything in units of
//! the cell measure, and share no code with the operator kernels. They are
//! slow and meant for small spaces.

use num_traits::Zero;

use crate::collections::{MeasSet, SparseCollection};
use crate::operators::AlphaSpec;
use crate::scalar::Rational;
use crate::space::{CellFunction, DyadicSpace};

fn cell_measure(space: &DyadicSpace) -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::from(space.cell_count()))
}

/// `μ(B)^{-1} ∫_B |f| dμ`.
pub fn average(f: &CellFunction<Rational>, b: &MeasSet) -> Rational {
    let mu = cell_measure(&f.space());
    let mut integral = Rational::zero();
    let mut measure = Rational::zero();
    for x in 0..f.values().len() as u32 {
        if b.cells().contains(&x) {
            let v = &f.values()[x as usize];
            let a = if *v < Rational::zero() { -v.clone() } else { v.clone() };
            integral += a * &mu;
            measure += &mu;
        }
    }
    integral / measure
}

pub fn sparse(sets: &[MeasSet], f: &CellFunction<Rational>) -> Vec<Rational> {
    (0..f.values().len() as u32)
        .map(|x| {
            sets.iter()
                .filter(|s| s.cells().contains(&x))
                .fold(Rational::zero(), |acc, s| acc + average(f, s))
        })
        .collect()
}

pub fn maximal(sets: &[MeasSet], f: &CellFunction<Rational>) -> Vec<Rational> {
    (0..f.values().len() as u32)
        .map(|x| {
            sets.iter()
                .filter(|s| s.cells().contains(&x))
                .map(|s| average(f, s))
                .fold(Rational::zero(), |m, v| if v > m { v } else { m })
        })
        .collect()
}

pub fn max_sparse(collections: &[SparseCollection], f: &CellFunction<Rational>) -> Vec<Rational> {
    let parts: Vec<Vec<Rational>> = collections.iter().map(|c| sparse(c.sets(), f)).collect();
    (0..f.values().len())
        .map(|x| {
            parts
                .iter()
                .map(|p| p[x].clone())
                .fold(Rational::zero(), |m, v| if v > m { v } else { m })
        })
        .collect()
}

/// `Σ_R ⟨f⟩_R 1_{G(R)}` for `α = 1`.
pub fn alpha_one(spec: &AlphaSpec, f: &CellFunction<Rational>) -> Vec<Rational> {
    assert_eq!(spec.alpha(), 1.0, "the exact oracle covers α = 1");
    (0..f.values().len() as u32)
        .map(|x| {
            spec.base()
                .sets()
                .iter()
                .zip(spec.images())
                .filter(|(_, g)| g.as_ref().is_some_and(|g| g.cells().contains(&x)))
                .fold(Rational::zero(), |acc, (r, _)| acc + average(f, r))
        })
        .collect()
}

/// `Σ_{S ⊆ R_0} 1_S`, `R_0 = X` when `None`.
pub fn overlap(sets: &[MeasSet], r0: Option<&MeasSet>, space: &DyadicSpace) -> Vec<u64> {
    (0..space.cell_count() as u32)
        .map(|x| {
            sets.iter()
                .filter(|s| s.cells().contains(&x))
                .filter(|s| r0.is_none_or(|r| s.cells().iter().all(|c| r.cells().contains(c))))
                .count() as u64
        })
        .collect()
}

/// `𝒮_j(R)` straight from the recursive definition: maximal members inside
/// `R` not taken by earlier generations.
pub fn generation(sets: &[MeasSet], r: &MeasSet, j: usize) -> Vec<MeasSet> {
    let inside = |a: &MeasSet, b: &MeasSet| a.cells().iter().all(|c| b.cells().contains(c));
    let mut used: Vec<MeasSet> = vec![r.clone()];
    let mut current = vec![r.clone()];
    for _ in 0..j {
        let rest: Vec<&MeasSet> = sets.iter().filter(|s| inside(s, r) && !used.contains(s)).collect();
        current = rest
            .iter()
            .filter(|s| !rest.iter().any(|t| t != *s && inside(s, t)))
            .map(|s| (*s).clone())
            .collect();
        used.extend(current.iter().cloned());
    }
    current
}

/// `μ(G_j(R))` as an exact fraction of the space.
pub fn generation_measure(sets: &[MeasSet], r: &MeasSet, j: usize, space: &DyadicSpace) -> Rational {
    let mut cells: Vec<u32> = generation(sets, r, j).iter().flat_map(|s| s.cells().to_vec()).collect();
    cells.sort_unstable();
    cells.dedup();
    Rational::from_integer(cells.len().into()) * cell_measure(space)
}

/// `μ(R) / Σ_{S ⊆ R} μ(S)` minimized over `R`.
pub fn max_sparsity(sets: &[MeasSet]) -> Rational {
    let inside = |a: &MeasSet, b: &MeasSet| a.cells().iter().all(|c| b.cells().contains(c));
    let mut best = Rational::from_integer(1.into());
    for r in sets {
        let sum: usize = sets.iter().filter(|s| inside(s, r)).map(|s| s.len()).sum();
        let v = Rational::new(r.len().into(), sum.into());
        if v < best {
            best = v;
        }
    }
    best
}
