//! Workloads shared by the kernel benchmarks.

use sparselab::collections::{build_random_sparse, build_tower, ChildSelector};
use sparselab::directional::{build_shear_family, ShearDirection, ShearFamily};
use sparselab::operators::OperatorFamily;
use sparselab::{build_space, CellFunction, DyadicSpace, SparseCollection};

pub const SEED: u64 = 0x5EED;

/// Deterministic non-negative field with values `k/8`.
pub fn field(space: &DyadicSpace) -> CellFunction<f64> {
    let v = (0..space.cell_count()).map(|i| ((i * 7919) % 17) as f64 / 8.0).collect();
    CellFunction::new(*space, v).expect("finite")
}

/// Random sparse family with `count` members on `d = 1`.
pub fn line_family(depth: u32, count: usize) -> (DyadicSpace, SparseCollection) {
    let space = build_space(1, depth).expect("valid depth");
    let c = build_random_sparse(&space, SEED, 0.5, count).expect("feasible");
    (space, c)
}

/// `n` seeded towers on `d = 1`.
pub fn tower_family(depth: u32, n: usize) -> (DyadicSpace, OperatorFamily) {
    let space = build_space(1, depth).expect("valid depth");
    let cols = (0..n as u64)
        .map(|k| build_tower(&space, &space.root(), depth, ChildSelector::Seeded(SEED + k)).expect("fits"))
        .collect();
    (space, OperatorFamily::new(cols).expect("nonempty"))
}

/// Shear families with slopes `1..=n` on a `2^depth × 2^depth` grid.
pub fn shear_families(depth: u32, n: usize) -> (DyadicSpace, Vec<ShearFamily>) {
    let space = build_space(2, depth).expect("valid depth");
    let fams = (1..=n as i64)
        .map(|a| {
            let dir = ShearDirection::new(&space, a, false).expect("valid slope");
            build_shear_family(&space, dir, SEED + a as u64, 0.25).expect("feasible")
        })
        .collect();
    (space, fams)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build() {
        assert_eq!(line_family(8, 32).1.len(), 32);
        assert_eq!(tower_family(6, 4).1.len(), 4);
        assert_eq!(shear_families(4, 2).1.len(), 2);
        assert_eq!(field(&build_space(1, 3).unwrap()).values().len(), 8);
    }
}
