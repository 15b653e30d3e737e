//! Finite dyadic measure spaces and functions constant on their cells.
//!
//! A [`DyadicSpace`] of dimension `d` and depth `L` splits `[0,1)^d` into
//! `2^{dL}` congruent cells carrying Lebesgue measure. Cells are numbered in
//! row-major order of their multi-index (coordinate 0 most significant); that
//! order is the canonical iteration order for every reduction in the crate.
//!
//! Level sets always use the strict inequality `{|f| > λ}`.

use serde::{Deserialize, Serialize};

use crate::collections::MeasSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on `d * L`, the number of bits in a cell index.
pub const MAX_INDEX_BITS: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicSpace {
    #[serde(rename = "d")]
    dim: u32,
    #[serde(rename = "L")]
    depth: u32,
}

/// `build_space(d, L)` with the default size cap.
pub fn build_space(dim: u32, depth: u32) -> Result<DyadicSpace> {
    DyadicSpace::with_cap(dim, depth, MAX_INDEX_BITS)
}

impl DyadicSpace {
    pub fn new(dim: u32, depth: u32) -> Result<Self> {
        build_space(dim, depth)
    }

    pub fn with_cap(dim: u32, depth: u32, cap: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let bits = dim.saturating_mul(depth);
        if bits > cap.min(31) {
            return Err(Error::Size { dim, depth, cap });
        }
        Ok(DyadicSpace { dim, depth })
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Cells per axis, `2^L`.
    #[inline]
    pub fn side(&self) -> usize {
        1usize << self.depth
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        1usize << (self.dim * self.depth)
    }

    #[inline]
    pub fn cell_measure(&self) -> f64 {
        1.0 / self.cell_count() as f64
    }

    /// Measure of `count` cells. Exact: cell measures are powers of two.
    #[inline]
    pub fn measure_of(&self, count: usize) -> f64 {
        count as f64 * self.cell_measure()
    }

    pub fn multi_index(&self, cell: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.dim as usize];
        let mask = (self.side() - 1) as u32;
        let mut rest = cell;
        for k in (0..self.dim as usize).rev() {
            out[k] = rest & mask;
            rest >>= self.depth;
        }
        out
    }

    pub fn cell_index(&self, coords: &[u32]) -> u32 {
        debug_assert_eq!(coords.len(), self.dim as usize);
        coords
            .iter()
            .fold(0u32, |acc, &c| (acc << self.depth) | c)
    }

    /// Ancestor cube of `cell` at `level`.
    pub fn ancestor(&self, cell: u32, level: u32) -> DyadicCube {
        let shift = self.depth - level;
        DyadicCube {
            level,
            coords: self
                .multi_index(cell)
                .into_iter()
                .map(|c| c >> shift)
                .collect(),
        }
    }

    /// The whole space as a level-0 cube.
    pub fn root(&self) -> DyadicCube {
        DyadicCube {
            level: 0,
            coords: vec![0; self.dim as usize],
        }
    }

    pub fn cube_cells(&self, cube: &DyadicCube) -> Vec<u32> {
        assert!(cube.level <= self.depth, "cube finer than the space");
        assert_eq!(cube.coords.len(), self.dim as usize);
        let width = 1u32 << (self.depth - cube.level);
        let mut cells = vec![0u32];
        for &k in &cube.coords {
            let lo = k * width;
            let mut next = Vec::with_capacity(cells.len() * width as usize);
            for &prefix in &cells {
                for c in lo..lo + width {
                    next.push((prefix << self.depth) | c);
                }
            }
            cells = next;
        }
        cells
    }

    pub fn cube_set(&self, cube: &DyadicCube) -> MeasSet {
        MeasSet::from_sorted_unchecked(self, self.cube_cells(cube))
    }

    /// All cubes at `level`, in canonical order.
    pub fn cubes_at(&self, level: u32) -> Vec<DyadicCube> {
        let per_axis = 1u32 << level;
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..per_axis).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|coords| DyadicCube { level, coords })
            .collect()
    }
}

/// A dyadic cube: level `l` and integer coordinates in `[0, 2^l)^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub coords: Vec<u32>,
}

impl DyadicCube {
    /// The `2^d` children, in canonical order.
    pub fn children(&self) -> Vec<DyadicCube> {
        let d = self.coords.len();
        (0..1u32 << d)
            .map(|bits| DyadicCube {
                level: self.level + 1,
                coords: self
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| 2 * c + ((bits >> (d - 1 - k)) & 1))
                    .collect(),
            })
            .collect()
    }

    /// Descend `levels` times along the first child.
    pub fn first_descendant(&self, levels: u32) -> DyadicCube {
        DyadicCube {
            level: self.level + levels,
            coords: self.coords.iter().map(|&c| c << levels).collect(),
        }
    }

    pub fn contains(&self, other: &DyadicCube) -> bool {
        other.level >= self.level
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(&a, &b)| b >> (other.level - self.level) == a)
    }
}

/// A real-valued function constant on the finest cells of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct CellFunction<T = f64> {
    space: DyadicSpace,
    values: Vec<T>,
}

impl<T: Scalar> CellFunction<T> {
    pub fn new(space: DyadicSpace, values: Vec<T>) -> Result<Self> {
        if values.len() != space.cell_count() {
            return Err(Error::domain(format!(
                "expected {} cell values, got {}",
                space.cell_count(),
                values.len()
            )));
        }
        if let Some(c) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::domain(format!("non-finite value at cell {c}")));
        }
        Ok(CellFunction { space, values })
    }

    pub(crate) fn from_raw(space: DyadicSpace, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), space.cell_count());
        CellFunction { space, values }
    }

    pub fn zeros(space: DyadicSpace) -> Self {
        CellFunction::constant(space, T::zero())
    }

    pub fn constant(space: DyadicSpace, value: T) -> Self {
        CellFunction {
            space,
            values: vec![value; space.cell_count()],
        }
    }

    /// `value` on `set`, zero elsewhere.
    pub fn indicator(space: DyadicSpace, set: &MeasSet, value: T) -> Self {
        let mut f = CellFunction::zeros(space);
        for &c in set.cells() {
            f.values[c as usize] = value.clone();
        }
        f
    }

    #[inline]
    pub fn space(&self) -> DyadicSpace {
        self.space
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn get(&self, cell: u32) -> &T {
        &self.values[cell as usize]
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CellFunction<U> {
        CellFunction {
            space: self.space,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> CellFunction<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| {
            let a = v.abs_val();
            if a > m {
                a
            } else {
                m
            }
        })
    }

    /// `f ≤ g` at every cell.
    pub fn le_pointwise(&self, other: &CellFunction<T>) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// `⟨f⟩_B = μ(B)^{-1} ∫_B |f|`.
pub fn average<T: Scalar>(f: &CellFunction<T>, set: &MeasSet) -> T {
    sum_abs(f.values(), set.cells()) / T::from_count(set.len())
}

/// Average over an explicit list of cells; an empty list is a domain error.
pub fn average_cells<T: Scalar>(f: &CellFunction<T>, cells: &[u32]) -> Result<T> {
    if cells.is_empty() {
        return Err(Error::domain("average over an empty set"));
    }
    if cells.iter().any(|&c| c as usize >= f.values().len()) {
        return Err(Error::domain("cell index outside the space"));
    }
    Ok(sum_abs(f.values(), cells) / T::from_count(cells.len()))
}

#[inline]
pub(crate) fn sum_abs<T: Scalar>(values: &[T], cells: &[u32]) -> T {
    cells
        .iter()
        .fold(T::zero(), |acc, &c| acc + values[c as usize].abs_val())
}

/// `‖f‖_p`; pass `f64::INFINITY` for the sup norm.
pub fn lp_norm<T: Scalar>(f: &CellFunction<T>, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("p must be >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs().to_f64());
    }
    let mu = f.space().cell_measure();
    let s: f64 = f
        .values()
        .iter()
        .map(|v| {
            let a = v.to_f64().abs();
            if p == 1.0 {
                a
            } else if p == 2.0 {
                a * a
            } else {
                a.powf(p)
            }
        })
        .sum();
    let s = s * mu;
    Ok(if p == 1.0 {
        s
    } else if p == 2.0 {
        s.sqrt()
    } else {
        s.powf(1.0 / p)
    })
}

/// Number of cells with `|f| > λ`.
pub fn distribution_count<T: Scalar>(f: &CellFunction<T>, lambda: &T) -> usize {
    f.values()
        .iter()
        .filter(|v| v.abs_val() > *lambda)
        .count()
}

/// `μ{x : |f(x)| > λ}`.
pub fn distribution<T: Scalar>(f: &CellFunction<T>, lambda: &T) -> f64 {
    f.space().measure_of(distribution_count(f, lambda))
}

/// Distinct values of `|f|`, ascending.
pub fn distinct_abs_values(f: &CellFunction<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = f.values().iter().map(|x| x.abs()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
