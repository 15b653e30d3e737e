//! Three shifted dyadic grids on the line and the domination of interval
//! sparse operators by martingale ones.
//!
//! The unit interval (`2^L` cells) is embedded at offset `2^L` inside an
//! ambient line of `4 · 2^L` cells; functions are extended by zero. Grid `t`
//! (`t = 0, 1, 2`) at scale `2^s` cells starts its intervals at
//! `t · ((-1)^s 2^s − 1) / 3 (mod 2^s)`. These offsets are integers, and
//! consecutive scales differ by a multiple of `2^s`, so each grid is nested.
//! Grid intervals are clipped to the ambient line.

use std::collections::HashMap;

use crate::collections::{verify_laminar, MartingaleCollection, MeasSet, SparseCollection};
use crate::error::{Error, Result};
use crate::operators::apply_sparse;
use crate::scalar::Scalar;
use crate::space::{CellFunction, DyadicSpace};

/// Ratio bound `μ(B') ≤ C μ(B)` enforced by the cover.
pub const COVER_CONSTANT: usize = 8;
pub const GRID_COUNT: usize = 3;

/// The unit interval placed inside `[0, 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ambient {
    original: DyadicSpace,
    ambient: DyadicSpace,
    offset: u32,
}

impl Ambient {
    pub fn new(space: &DyadicSpace) -> Result<Self> {
        if space.dim() != 1 {
            return Err(Error::domain("shifted-grid covers are implemented for d = 1 only"));
        }
        let ambient = DyadicSpace::new(1, space.depth() + 2)?;
        Ok(Ambient {
            original: *space,
            ambient,
            offset: space.side() as u32,
        })
    }

    pub fn original(&self) -> DyadicSpace {
        self.original
    }

    pub fn space(&self) -> DyadicSpace {
        self.ambient
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn embed_set(&self, set: &MeasSet) -> MeasSet {
        set.shifted(&self.ambient, self.offset)
            .expect("original cells fit in the ambient line")
    }

    pub fn embed<T: Scalar>(&self, f: &CellFunction<T>) -> CellFunction<T> {
        let mut values = vec![T::zero(); self.ambient.cell_count()];
        let off = self.offset as usize;
        values[off..off + f.values().len()].clone_from_slice(f.values());
        CellFunction::from_raw(self.ambient, values)
    }

    pub fn restrict<T: Scalar>(&self, g: &CellFunction<T>) -> CellFunction<T> {
        let off = self.offset as usize;
        let n = self.original.cell_count();
        CellFunction::from_raw(self.original, g.values()[off..off + n].to_vec())
    }
}

/// Start offset of grid `t` at scale `2^s`, before reduction mod `2^s`.
fn grid_offset(t: usize, s: u32) -> i64 {
    let p = 1i64 << s;
    let signed = if s.is_multiple_of(2) { p } else { -p };
    t as i64 * (signed - 1) / 3
}

/// Interval `[start, end)` of grid `t`, scale `2^s`, containing cell `x`,
/// clipped to `[0, len)`.
pub fn grid_interval(t: usize, s: u32, x: u32, len: u32) -> (u32, u32) {
    let w = 1i64 << s;
    let o = grid_offset(t, s);
    let start = o + (x as i64 - o).div_euclid(w) * w;
    let end = start + w;
    (start.max(0) as u32, end.min(len as i64) as u32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverEntry {
    pub grid: usize,
    /// `B'` in ambient cells.
    pub image: MeasSet,
}

/// Each interval `B` mapped to a shifted-dyadic `B' ⊇ B` with `μ(B') ≤ 8 μ(B)`.
#[derive(Debug, Clone)]
pub struct FiniteMartingaleCover {
    ambient: Ambient,
    entries: Vec<CoverEntry>,
    grids: Vec<MartingaleCollection>,
}

impl FiniteMartingaleCover {
    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    /// Distinct images per grid; each is a martingale collection.
    pub fn grids(&self) -> &[MartingaleCollection] {
        &self.grids
    }

    pub fn constant(&self) -> usize {
        COVER_CONSTANT
    }

    /// `(|B'|, |B|)` for entry `i`, given the embedded `B`.
    pub fn ratio(&self, i: usize, b: &MeasSet) -> f64 {
        self.entries[i].image.len() as f64 / b.len() as f64
    }
}

fn contiguous(set: &MeasSet) -> bool {
    let c = set.cells();
    (c[c.len() - 1] - c[0]) as usize + 1 == c.len()
}

/// Smallest clipped grid interval containing ambient cells `[a, b)`; ties go
/// to the lowest grid index.
pub fn best_cover(a: u32, b: u32, depth: u32, len: u32) -> (usize, u32, u32) {
    let mut best: Option<(usize, u32, u32)> = None;
    for t in 0..GRID_COUNT {
        for s in 0..=depth {
            let (st, en) = grid_interval(t, s, a, len);
            if b <= en {
                if best.is_none_or(|(_, bs, be)| en - st < be - bs) {
                    best = Some((t, st, en));
                }
                break;
            }
        }
    }
    best.expect("the top scale of grid 0 covers the ambient line")
}

pub fn cover_shifted_grids(space: &DyadicSpace, intervals: &[MeasSet]) -> Result<FiniteMartingaleCover> {
    let ambient = Ambient::new(space)?;
    let amb = ambient.space();
    let len = amb.cell_count() as u32;
    let mut entries = Vec::with_capacity(intervals.len());
    for (i, b) in intervals.iter().enumerate() {
        if !contiguous(b) || *b.cells().last().unwrap() as usize >= space.cell_count() {
            return Err(Error::domain(format!("set #{i} is not an interval of the space")));
        }
        let lo = b.cells()[0] + ambient.offset;
        let hi = lo + b.len() as u32;
        let (grid, st, en) = best_cover(lo, hi, amb.depth(), len);
        entries.push(CoverEntry {
            grid,
            image: MeasSet::interval(&amb, st, en)?,
        });
    }
    let mut grids = Vec::with_capacity(GRID_COUNT);
    for t in 0..GRID_COUNT {
        let mut images: Vec<MeasSet> = Vec::new();
        for e in entries.iter().filter(|e| e.grid == t) {
            if !images.contains(&e.image) {
                images.push(e.image.clone());
            }
        }
        grids.push(verify_laminar(images)?);
    }
    Ok(FiniteMartingaleCover {
        ambient,
        entries,
        grids,
    })
}

/// Martingale collections on the ambient line dominating an interval family.
#[derive(Debug, Clone)]
pub struct Domination {
    ambient: Ambient,
    collections: Vec<SparseCollection>,
    /// `(grid, multiplicity rank)` of each collection.
    labels: Vec<(usize, usize)>,
}

impl Domination {
    pub fn collections(&self) -> &[SparseCollection] {
        &self.collections
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn constant(&self) -> usize {
        COVER_CONSTANT
    }

    /// `Σ_i Λ_{𝒮_i} f` on the original space (f extended by zero).
    pub fn dominating_sum<T: Scalar>(&self, f: &CellFunction<T>) -> CellFunction<T> {
        let g = self.ambient.embed(f);
        let mut total = vec![T::zero(); g.values().len()];
        for c in &self.collections {
            let part = apply_sparse(c.sets(), &g);
            for (acc, v) in total.iter_mut().zip(part.into_values()) {
                *acc = acc.clone() + v;
            }
        }
        self.ambient
            .restrict(&CellFunction::from_raw(self.ambient.space(), total))
    }
}

/// Groups the cover images by grid. Several intervals may share one image;
/// the r-th interval mapped to a given image goes to collection `(grid, r)`,
/// so every collection is duplicate-free and `Λ_𝒮 f ≤ 8 Σ_i Λ_{𝒮_i} f`
/// holds term by term.
pub fn dominate_by_martingale(intervals: &[MeasSet], cover: &FiniteMartingaleCover) -> Result<Domination> {
    if intervals.len() != cover.entries().len() {
        return Err(Error::domain("cover does not match the interval family"));
    }
    let mut rank: HashMap<(usize, &MeasSet), usize> = HashMap::new();
    let mut groups: Vec<((usize, usize), Vec<MeasSet>)> = Vec::new();
    for e in cover.entries() {
        let r = rank.entry((e.grid, &e.image)).or_insert(0);
        let label = (e.grid, *r);
        *r += 1;
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some((_, sets)) => sets.push(e.image.clone()),
            None => groups.push((label, vec![e.image.clone()])),
        }
    }
    groups.sort_by_key(|(l, _)| *l);
    let mut collections = Vec::with_capacity(groups.len());
    let mut labels = Vec::with_capacity(groups.len());
    for (label, sets) in groups {
        collections.push(SparseCollection::from_sets(sets)?);
        labels.push(label);
    }
    Ok(Domination {
        ambient: cover.ambient,
        collections,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_space;

    #[test]
    fn offsets_nest_across_scales() {
        for t in 0..GRID_COUNT {
            for s in 0..20u32 {
                let d = grid_offset(t, s + 1) - grid_offset(t, s);
                assert_eq!(d.rem_euclid(1 << s), 0, "t={t} s={s}");
            }
        }
    }

    #[test]
    fn grids_are_laminar_at_every_scale() {
        let len = 64u32;
        for t in 0..GRID_COUNT {
            let mut sets = Vec::new();
            let amb = build_space(1, 6).unwrap();
            for s in 0..=6 {
                let mut x = 0;
                while x < len {
                    let (a, b) = grid_interval(t, s, x, len);
                    let set = MeasSet::interval(&amb, a, b).unwrap();
                    if !sets.contains(&set) {
                        sets.push(set);
                    }
                    x = b;
                }
            }
            assert!(verify_laminar(sets).is_ok(), "grid {t}");
        }
    }

    #[test]
    fn every_interval_is_covered_within_the_constant() {
        for depth in 0..=7u32 {
            let s = build_space(1, depth).unwrap();
            let amb = Ambient::new(&s).unwrap();
            let n = s.cell_count() as u32;
            for a in 0..n {
                for b in a + 1..=n {
                    let lo = a + amb.offset();
                    let hi = b + amb.offset();
                    let (_, st, en) = best_cover(lo, hi, amb.space().depth(), amb.space().cell_count() as u32);
                    assert!(st <= lo && hi <= en);
                    assert!((en - st) as usize <= COVER_CONSTANT * (b - a) as usize, "[{a},{b}) depth {depth}");
                }
            }
        }
    }

    #[test]
    fn dyadic_interval_maps_to_itself() {
        let s = build_space(1, 4).unwrap();
        let b = MeasSet::interval(&s, 4, 8).unwrap();
        let cover = cover_shifted_grids(&s, std::slice::from_ref(&b)).unwrap();
        let e = &cover.entries()[0];
        assert_eq!(e.grid, 0);
        assert_eq!(e.image, cover.ambient().embed_set(&b));
    }

    #[test]
    fn straddling_midpoint() {
        // [3/8, 5/8) on depth 3
        let s = build_space(1, 3).unwrap();
        let b = MeasSet::interval(&s, 3, 5).unwrap();
        let cover = cover_shifted_grids(&s, std::slice::from_ref(&b)).unwrap();
        let e = &cover.entries()[0];
        let embedded = cover.ambient().embed_set(&b);
        assert!(embedded.is_subset(&e.image));
        // measure in original units: |B'| / 8 ≤ 8 · 1/4
        assert!(e.image.len() as f64 / 8.0 <= 2.0);
        assert!(e.image.len() <= 8 * b.len());
    }

    #[test]
    fn non_interval_is_rejected() {
        let s = build_space(1, 3).unwrap();
        let b = MeasSet::new(&s, vec![0, 2]).unwrap();
        assert!(cover_shifted_grids(&s, &[b]).is_err());
        let s2 = build_space(2, 2).unwrap();
        assert!(cover_shifted_grids(&s2, &[]).is_err());
    }

    #[test]
    fn shared_images_are_split_by_rank() {
        let s = build_space(1, 4).unwrap();
        // two different intervals with the same best cover
        let a = MeasSet::interval(&s, 5, 8).unwrap();
        let b = MeasSet::interval(&s, 4, 7).unwrap();
        let cover = cover_shifted_grids(&s, &[a.clone(), b.clone()]).unwrap();
        let dom = dominate_by_martingale(&[a, b], &cover).unwrap();
        for c in dom.collections() {
            assert!(!c.is_empty());
        }
        let total: usize = dom.collections().iter().map(|c| c.len()).sum();
        assert_eq!(total, 2);
    }
}
