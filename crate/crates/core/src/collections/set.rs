use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::space::DyadicSpace;

/// A nonempty union of finest cells, stored as a sorted index list.
#[derive(Debug, Clone)]
pub struct MeasSet {
    cells: Vec<u32>,
    measure: f64,
}

impl PartialEq for MeasSet {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for MeasSet {}

impl Hash for MeasSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl MeasSet {
    pub fn new(space: &DyadicSpace, mut cells: Vec<u32>) -> Result<Self> {
        cells.sort_unstable();
        cells.dedup();
        if cells.is_empty() {
            return Err(Error::domain("measurable set must be nonempty"));
        }
        if *cells.last().unwrap() as usize >= space.cell_count() {
            return Err(Error::domain("cell index outside the space"));
        }
        Ok(MeasSet::from_sorted_unchecked(space, cells))
    }

    pub(crate) fn from_sorted_unchecked(space: &DyadicSpace, cells: Vec<u32>) -> Self {
        debug_assert!(!cells.is_empty());
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        let measure = space.measure_of(cells.len());
        MeasSet { cells, measure }
    }

    /// Cells `start..end` in canonical order (an interval when `d = 1`).
    pub fn interval(space: &DyadicSpace, start: u32, end: u32) -> Result<Self> {
        if start >= end || end as usize > space.cell_count() {
            return Err(Error::domain(format!(
                "invalid cell range {start}..{end} for {} cells",
                space.cell_count()
            )));
        }
        Ok(MeasSet::from_sorted_unchecked(space, (start..end).collect()))
    }

    /// Inverse of [`MeasSet::ranges`].
    pub fn from_ranges(space: &DyadicSpace, ranges: &[(u32, u32)]) -> Result<Self> {
        let mut cells = Vec::new();
        for &(a, b) in ranges {
            if a >= b {
                return Err(Error::domain(format!("empty cell range {a}..{b}")));
            }
            cells.extend(a..b);
        }
        let n = cells.len();
        let set = MeasSet::new(space, cells)?;
        if set.len() != n {
            return Err(Error::domain("overlapping cell ranges"));
        }
        Ok(set)
    }

    #[inline]
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn contains(&self, cell: u32) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Maximal runs `[a, b)` of consecutive cell indices.
    pub fn ranges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &c in &self.cells {
            match out.last_mut() {
                Some((_, end)) if *end == c => *end += 1,
                _ => out.push((c, c + 1)),
            }
        }
        out
    }

    pub fn intersection_len(&self, other: &MeasSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        let (a, b) = (&self.cells, &other.cells);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn is_subset(&self, other: &MeasSet) -> bool {
        self.len() <= other.len()
            && self.cells[0] >= other.cells[0]
            && self.cells[self.len() - 1] <= other.cells[other.len() - 1]
            && self.intersection_len(other) == self.len()
    }

    pub fn is_disjoint(&self, other: &MeasSet) -> bool {
        self.cells[self.len() - 1] < other.cells[0]
            || other.cells[other.len() - 1] < self.cells[0]
            || self.intersection_len(other) == 0
    }

    /// The same cells translated by `offset` into `target`.
    pub fn shifted(&self, target: &DyadicSpace, offset: u32) -> Result<MeasSet> {
        MeasSet::new(target, self.cells.iter().map(|&c| c + offset).collect())
    }

    /// Union of sets of one space; `None` when `sets` is empty.
    pub fn union_of<'a>(
        space: &DyadicSpace,
        sets: impl IntoIterator<Item = &'a MeasSet>,
    ) -> Option<MeasSet> {
        let mut cells: Vec<u32> = sets.into_iter().flat_map(|s| s.cells.iter().copied()).collect();
        if cells.is_empty() {
            return None;
        }
        cells.sort_unstable();
        cells.dedup();
        Some(MeasSet::from_sorted_unchecked(space, cells))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_space;

    #[test]
    fn construction_normalizes_and_validates() {
        let s = build_space(1, 3).unwrap();
        let a = MeasSet::new(&s, vec![3, 1, 1, 2]).unwrap();
        assert_eq!(a.cells(), &[1, 2, 3]);
        assert_eq!(a.measure(), 3.0 / 8.0);
        assert!(MeasSet::new(&s, vec![]).is_err());
        assert!(MeasSet::new(&s, vec![8]).is_err());
        assert!(MeasSet::interval(&s, 4, 4).is_err());
    }

    #[test]
    fn ranges_roundtrip() {
        let s = build_space(1, 4).unwrap();
        let a = MeasSet::new(&s, vec![0, 1, 2, 5, 7, 8]).unwrap();
        assert_eq!(a.ranges(), vec![(0, 3), (5, 6), (7, 9)]);
        assert_eq!(MeasSet::from_ranges(&s, &a.ranges()).unwrap(), a);
        assert!(MeasSet::from_ranges(&s, &[(0, 3), (2, 4)]).is_err());
    }

    #[test]
    fn subset_and_disjoint() {
        let s = build_space(1, 3).unwrap();
        let big = MeasSet::interval(&s, 0, 4).unwrap();
        let small = MeasSet::interval(&s, 1, 3).unwrap();
        let other = MeasSet::interval(&s, 4, 8).unwrap();
        let straddle = MeasSet::interval(&s, 2, 6).unwrap();
        assert!(small.is_subset(&big));
        assert!(!big.is_subset(&small));
        assert!(big.is_disjoint(&other));
        assert!(!big.is_disjoint(&straddle));
        assert_eq!(big.intersection_len(&straddle), 2);
    }
}
