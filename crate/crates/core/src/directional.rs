//! Sheared one-row rectangles on the discrete torus `[0,1)²`.
//!
//! With `n = 2^L` cells per side and slope `a / n`, band `b` over the dyadic
//! x-interval `I` is the set of cells `(x, (b + ⌊a x / n⌋) mod n)`, `x ∈ I`.
//! For a fixed direction the bands partition the space, and rectangles of one
//! band over nested intervals are nested. With `swap` the two axes trade
//! places, which covers the steep directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::collections::{MeasSet, ShearMeta, SparseCollection};
use crate::error::{Error, Result};
use crate::operators::{apply_maximal, Operator};
use crate::scalar::Scalar;
use crate::space::{CellFunction, DyadicSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShearDirection {
    /// Slope numerator over `2^L`.
    pub a: i64,
    pub swap: bool,
}

impl ShearDirection {
    pub fn new(space: &DyadicSpace, a: i64, swap: bool) -> Result<Self> {
        check_planar(space)?;
        let n = space.side() as i64;
        if a.abs() > n {
            return Err(Error::domain(format!("slope {a}/{n} outside [-1, 1]")));
        }
        Ok(ShearDirection { a, swap })
    }

    pub fn slope(&self, space: &DyadicSpace) -> f64 {
        self.a as f64 / space.side() as f64
    }

    /// Transverse offset of column `i`.
    fn offset(&self, i: u32, n: u32) -> u32 {
        (self.a * i as i64).div_euclid(n as i64).rem_euclid(n as i64) as u32
    }

    /// Cell of band `b` at position `i` along the direction.
    pub fn cell(&self, space: &DyadicSpace, band: u32, i: u32) -> u32 {
        let n = space.side() as u32;
        let t = (band + self.offset(i, n)) % n;
        if self.swap {
            t * n + i
        } else {
            i * n + t
        }
    }

    /// Band containing `cell`.
    pub fn band_of(&self, space: &DyadicSpace, cell: u32) -> (u32, u32) {
        let n = space.side() as u32;
        let (i, t) = if self.swap { (cell % n, cell / n) } else { (cell / n, cell % n) };
        ((t + n - self.offset(i, n)) % n, i)
    }

    /// Rectangle of band `b` over positions `start..end`.
    pub fn rectangle(&self, space: &DyadicSpace, band: u32, start: u32, end: u32) -> MeasSet {
        let cells = (start..end).map(|i| self.cell(space, band, i)).collect();
        MeasSet::new(space, cells).expect("rectangle cells lie in the space")
    }
}

fn check_planar(space: &DyadicSpace) -> Result<()> {
    if space.dim() != 2 {
        return Err(Error::domain("directional families live on 2-dimensional spaces"));
    }
    Ok(())
}

/// Seeded towers of sheared rectangles in one direction, one per chosen band.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearFamily {
    space: DyadicSpace,
    direction: ShearDirection,
    bands: Vec<u32>,
    per_band: Vec<SparseCollection>,
    collection: SparseCollection,
}

impl ShearFamily {
    pub fn space(&self) -> DyadicSpace {
        self.space
    }

    pub fn direction(&self) -> ShearDirection {
        self.direction
    }

    pub fn bands(&self) -> &[u32] {
        &self.bands
    }

    /// One collection per band, in band order.
    pub fn band_collections(&self) -> &[SparseCollection] {
        &self.per_band
    }

    /// All rectangles of the family; laminar since bands are disjoint.
    pub fn collection(&self) -> &SparseCollection {
        &self.collection
    }

    pub fn sets(&self) -> &[MeasSet] {
        self.collection.sets()
    }

    pub fn meta(&self, band_index: usize) -> ShearMeta {
        ShearMeta {
            slope: self.direction.a,
            swap: self.direction.swap,
            band: self.bands[band_index],
        }
    }
}

/// Every band enters with probability `density` and carries a full tower of
/// nested dyadic intervals, `[0, 1)` down to one cell, with seeded children.
pub fn build_shear_family(
    space: &DyadicSpace,
    direction: ShearDirection,
    seed: u64,
    density: f64,
) -> Result<ShearFamily> {
    check_planar(space)?;
    let n = space.side() as u32;
    if direction.a.abs() > n as i64 {
        return Err(Error::domain(format!("slope {}/{n} outside [-1, 1]", direction.a)));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::domain(format!("density must lie in [0,1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bands = Vec::new();
    let mut per_band = Vec::new();
    let mut all = Vec::new();
    for b in 0..n {
        if !rng.random_bool(density) {
            continue;
        }
        let (mut start, mut len) = (0u32, n);
        let mut sets = vec![direction.rectangle(space, b, 0, n)];
        while len > 1 {
            len /= 2;
            if rng.random_bool(0.5) {
                start += len;
            }
            sets.push(direction.rectangle(space, b, start, start + len));
        }
        all.extend(sets.iter().cloned());
        per_band.push(SparseCollection::from_sets(sets)?);
        bands.push(b);
    }
    Ok(ShearFamily {
        space: *space,
        direction,
        bands,
        per_band,
        collection: SparseCollection::from_sets(all)?,
    })
}

/// `M_v f`: the maximal average over every sheared rectangle of direction `v`
/// (all bands, all dyadic intervals) containing the cell.
pub fn direction_maximal<T: Scalar>(space: &DyadicSpace, direction: ShearDirection, f: &CellFunction<T>) -> CellFunction<T> {
    let n = space.side();
    let mut out = vec![T::zero(); n * n];
    for b in 0..n as u32 {
        let cells: Vec<u32> = (0..n as u32).map(|i| direction.cell(space, b, i)).collect();
        let mut sums: Vec<T> = cells.iter().map(|&c| f.values()[c as usize].abs_val()).collect();
        let mut best: Vec<T> = sums.clone();
        let mut width = 1usize;
        while width < n {
            sums = sums
                .chunks(2)
                .map(|p| p[0].clone() + p[1].clone())
                .collect();
            width *= 2;
            let w = T::from_count(width);
            for (i, bi) in best.iter_mut().enumerate() {
                let avg = sums[i / width].clone() / w.clone();
                if avg > *bi {
                    *bi = avg;
                }
            }
        }
        for (i, v) in best.into_iter().enumerate() {
            out[cells[i] as usize] = v;
        }
    }
    CellFunction::from_raw(*space, out)
}

/// `M_V f = max_v M_v f`.
pub fn directional_maximal<T: Scalar>(
    space: &DyadicSpace,
    directions: &[ShearDirection],
    f: &CellFunction<T>,
) -> CellFunction<T> {
    let parts: Vec<CellFunction<T>> = directions
        .par_iter()
        .map(|&d| direction_maximal(space, d, f))
        .collect();
    let mut out = vec![T::zero(); space.cell_count()];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p.into_values()) {
            if v > *o {
                *o = v;
            }
        }
    }
    CellFunction::from_raw(*space, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub cells: usize,
    /// First cell where `𝓜_𝒮 f > M_V f`.
    pub violation: Option<u32>,
    /// Cells where the two sides agree.
    pub equal_cells: usize,
}

impl DominationReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// `𝓜_𝒮 f ≤ M_V f` with `𝒮` the union of the families and `V` their directions.
#[allow(non_snake_case)]
pub fn verify_MV_domination<T: Scalar>(families: &[ShearFamily], f: &CellFunction<T>) -> DominationReport {
    let space = f.space();
    let sets: Vec<MeasSet> = families.iter().flat_map(|fam| fam.sets().iter().cloned()).collect();
    let dirs: Vec<ShearDirection> = families.iter().map(|fam| fam.direction).collect();
    let lhs = apply_maximal(&sets, f);
    let rhs = directional_maximal(&space, &dirs, f);
    let violation = (0..space.cell_count() as u32).find(|&c| lhs.values()[c as usize] > rhs.values()[c as usize]);
    let equal_cells = lhs.values().iter().zip(rhs.values()).filter(|(a, b)| a == b).count();
    DominationReport {
        cells: space.cell_count(),
        violation,
        equal_cells,
    }
}

/// `M_V` as an [`Operator`].
#[derive(Debug, Clone)]
pub struct DirectionalOp {
    pub space: DyadicSpace,
    pub directions: Vec<ShearDirection>,
}

impl Operator for DirectionalOp {
    fn space(&self) -> DyadicSpace {
        self.space
    }

    fn apply(&self, f: &CellFunction<f64>) -> CellFunction<f64> {
        directional_maximal(&self.space, &self.directions, f)
    }
}
