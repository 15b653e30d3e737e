use crate::collections::MeasSet;
use crate::error::{Error, Result};

const NO_OWNER: u32 = u32::MAX;

/// A laminar family: any two members are nested or disjoint.
///
/// Members keep their input order; `parent` is the smallest strict superset
/// in the family, so the family is a forest under inclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleCollection {
    sets: Vec<MeasSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    /// Parents before children: decreasing size, input order on ties.
    order: Vec<usize>,
}

/// Checks every pair for nesting or disjointness and builds the forest.
///
/// Runs in `O(Σ|S| + n log n)`: sets are visited by decreasing size while each
/// cell remembers the smallest member seen so far that contains it. The first
/// violating pair in that visiting order is reported, indices ascending.
pub fn verify_laminar(sets: Vec<MeasSet>) -> Result<MartingaleCollection> {
    let n = sets.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sets[b].len().cmp(&sets[a].len()).then(a.cmp(&b)));

    let max_cell = sets
        .iter()
        .map(|s| *s.cells().last().unwrap() as usize)
        .max()
        .unwrap_or(0);
    let mut owner = vec![NO_OWNER; if n == 0 { 0 } else { max_cell + 1 }];
    let mut parent = vec![None; n];
    let mut depth = vec![0usize; n];

    for &i in &order {
        let cells = sets[i].cells();
        let first = owner[cells[0] as usize];
        let uniform = cells.iter().all(|&c| owner[c as usize] == first);
        if !uniform {
            let mut seen: Vec<u32> = Vec::new();
            for &c in cells {
                let o = owner[c as usize];
                if o != NO_OWNER && !seen.contains(&o) {
                    seen.push(o);
                }
            }
            let culprit = seen
                .into_iter()
                .map(|o| o as usize)
                .find(|&o| !sets[i].is_subset(&sets[o]))
                .expect("a non-uniform owner map always has a straddling owner");
            return Err(Error::NotLaminar {
                first: culprit.min(i),
                second: culprit.max(i),
                overlap: sets[i].intersection_len(&sets[culprit]),
            });
        }
        if first != NO_OWNER {
            let p = first as usize;
            if sets[p].len() == sets[i].len() {
                return Err(Error::Duplicate {
                    first: p.min(i),
                    second: p.max(i),
                });
            }
            parent[i] = Some(p);
            depth[i] = depth[p] + 1;
        }
        for &c in cells {
            owner[c as usize] = i as u32;
        }
    }

    let mut children = vec![Vec::new(); n];
    for &i in &order {
        if let Some(p) = parent[i] {
            children[p].push(i);
        }
    }
    Ok(MartingaleCollection {
        sets,
        parent,
        children,
        depth,
        order,
    })
}

impl MartingaleCollection {
    pub fn empty() -> Self {
        verify_laminar(Vec::new()).expect("empty family is laminar")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    #[inline]
    pub fn sets(&self) -> &[MeasSet] {
        &self.sets
    }

    #[inline]
    pub fn set(&self, i: usize) -> &MeasSet {
        &self.sets[i]
    }

    #[inline]
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    #[inline]
    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Nesting depth: 0 for roots.
    #[inline]
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    /// Indices with parents before children.
    #[inline]
    pub fn top_down(&self) -> &[usize] {
        &self.order
    }

    pub fn roots(&self) -> Vec<usize> {
        self.order
            .iter()
            .copied()
            .filter(|&i| self.parent[i].is_none())
            .collect()
    }

    pub fn index_of(&self, set: &MeasSet) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }

    /// `i` and all members below it, top-down.
    pub fn subtree(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut k = 0;
        while k < out.len() {
            out.extend_from_slice(&self.children[out[k]]);
            k += 1;
        }
        out
    }

    /// For every member `R`, the cell count `Σ_{S ⊆ R} |S|`.
    pub fn subtree_cell_sums(&self) -> Vec<u64> {
        let mut sums: Vec<u64> = self.sets.iter().map(|s| s.len() as u64).collect();
        for &i in self.order.iter().rev() {
            if let Some(p) = self.parent[i] {
                sums[p] += sums[i];
            }
        }
        sums
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn into_sets(self) -> Vec<MeasSet> {
        self.sets
    }
}
