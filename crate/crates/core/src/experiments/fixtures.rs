//! Seeded inputs shared by the experiments, the command line and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collections::{build_random_sparse, build_tower, tower_cubes, ChildSelector, MeasSet, SparseCollection};
use crate::directional::{build_shear_family, ShearDirection, ShearFamily};
use crate::error::Result;
use crate::operators::{AlphaSpec, OperatorFamily};
use crate::scalar::{rational, Rational};
use crate::space::{build_space, CellFunction, DyadicSpace};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub space: DyadicSpace,
    pub collection: SparseCollection,
}

/// `R_0 ⊃ R_1 ⊃ … ⊃ R_m`, always the first child, on `d = 1`, `L = m`.
pub fn left_tower(m: u32) -> Fixture {
    let space = build_space(1, m).expect("small depth");
    let collection = build_tower(&space, &space.root(), m, ChildSelector::First).expect("fits");
    Fixture {
        name: format!("tower-{m}"),
        space,
        collection,
    }
}

const TARGETS: [(u64, u64); 5] = [(1, 2), (1, 4), (1, 3), (3, 5), (2, 5)];

/// Twenty seeded sparse families on spaces of at most `2^8` cells.
pub fn sparse_fixtures(seed: u64) -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20)
        .map(|i| {
            let (dim, depth) = if i % 2 == 0 { (1, 5 + (i as u32 / 2) % 4) } else { (2, 3 + (i as u32 / 2) % 2) };
            let space = build_space(dim, depth).expect("small space");
            let (a, b) = TARGETS[i % TARGETS.len()];
            let target = a as f64 / b as f64;
            let count = 4 + (i % 7) * 2;
            let s = rng.random::<u64>();
            let collection = build_random_sparse(&space, s, target, count).expect("feasible fixture");
            Fixture {
                name: format!("sparse-{i:02}-d{dim}-L{depth}-g{a}of{b}"),
                space,
                collection,
            }
        })
        .collect()
}

/// Dyadic rationals `k/8`, `-8 ≤ k ≤ 16`, as an exact function.
pub fn dyadic_function(space: &DyadicSpace, rng: &mut ChaCha8Rng) -> CellFunction<Rational> {
    let v = (0..space.cell_count())
        .map(|_| {
            if rng.random_bool(0.3) {
                rational(0, 1)
            } else {
                rational(rng.random_range(-8..=16), 8)
            }
        })
        .collect();
    CellFunction::new(*space, v).expect("finite")
}

/// Non-negative `f64` field with values `k/8`, `0 ≤ k ≤ 16`.
pub fn dyadic_field(space: &DyadicSpace, rng: &mut ChaCha8Rng) -> CellFunction<f64> {
    let v = (0..space.cell_count())
        .map(|_| rng.random_range(0..=16) as f64 / 8.0)
        .collect();
    CellFunction::new(*space, v).expect("finite")
}

/// Inputs for comparing the kernels with the direct evaluators.
#[derive(Debug, Clone)]
pub struct OracleCase {
    pub space: DyadicSpace,
    pub family: OperatorFamily,
    pub alpha: AlphaSpec,
    pub f: CellFunction<Rational>,
}

/// `G(R)`: a seeded descendant cube of `R` `levels` below, when one exists.
fn descendant_images(space: &DyadicSpace, c: &SparseCollection, rng: &mut ChaCha8Rng, levels: u32) -> Vec<Option<MeasSet>> {
    c.sets()
        .iter()
        .map(|r| {
            let cube = space.ancestor(r.cells()[0], space.depth() - ((r.len().trailing_zeros()) / space.dim()));
            if cube.level + levels > space.depth() {
                return None;
            }
            let path: Vec<usize> = (0..levels).map(|_| rng.random_range(0..1usize << space.dim())).collect();
            let cubes = tower_cubes(space, &cube, levels, ChildSelector::Path(path)).ok()?;
            Some(space.cube_set(cubes.last().unwrap()))
        })
        .collect()
}

pub fn oracle_cases(seed: u64, count: usize) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (dim, depth) = match i % 4 {
                0 => (1, 4 + (i as u32 / 4) % 5),
                1 => (2, 2 + (i as u32 / 4) % 3),
                2 => (1, 3),
                _ => (4, 2),
            };
            let space = build_space(dim, depth).expect("small space");
            let n = 1 + rng.random_range(0..4usize);
            let collections: Vec<SparseCollection> = (0..n)
                .map(|_| {
                    let count = 2 + rng.random_range(0..6usize);
                    build_random_sparse(&space, rng.random(), 0.25, count).expect("feasible")
                })
                .collect();
            let base = collections[0].clone();
            let images = descendant_images(&space, &base, &mut rng, 1);
            let alpha = AlphaSpec::new(base, images, 1.0, 1.0 / (1u64 << dim) as f64).expect("valid images");
            OracleCase {
                space,
                family: OperatorFamily::new(collections).expect("nonempty"),
                alpha,
                f: dyadic_function(&space, &mut rng),
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct IntervalFixture {
    pub name: String,
    pub space: DyadicSpace,
    pub intervals: Vec<MeasSet>,
}

/// Interval families on the line: dyadic, a tower shifted by a third of each
/// width, seeded random intervals, and the empty family.
pub fn interval_fixtures(seed: u64) -> Vec<IntervalFixture> {
    let space = build_space(1, 8).expect("small space");
    let n = space.cell_count() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dyadic = build_random_sparse(&space, rng.random(), 0.5, 24)
        .expect("feasible")
        .sets()
        .to_vec();
    let shifted = tower_cubes(&space, &space.root(), 8, ChildSelector::First)
        .expect("fits")
        .iter()
        .map(|c| {
            let set = space.cube_set(c);
            let len = set.len() as u32;
            let a = (set.cells()[0] + len / 3).min(n - len);
            MeasSet::interval(&space, a, a + len).expect("inside")
        })
        .collect();
    let random = (0..100)
        .map(|_| {
            let len = 1 + rng.random_range(0..n / 4);
            let a = rng.random_range(0..=n - len);
            MeasSet::interval(&space, a, a + len).expect("inside")
        })
        .collect();
    vec![
        IntervalFixture {
            name: "dyadic".into(),
            space,
            intervals: dyadic,
        },
        IntervalFixture {
            name: "shifted-tower".into(),
            space,
            intervals: shifted,
        },
        IntervalFixture {
            name: "random".into(),
            space,
            intervals: random,
        },
        IntervalFixture {
            name: "empty".into(),
            space,
            intervals: Vec::new(),
        },
    ]
}

/// Three seeded operator families.
pub fn family_fixtures(seed: u64) -> Vec<(DyadicSpace, OperatorFamily)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [(1u32, 8u32, 2usize), (2, 4, 4), (1, 7, 8)]
        .iter()
        .map(|&(dim, depth, n)| {
            let space = build_space(dim, depth).expect("small space");
            let cols = (0..n)
                .map(|_| build_random_sparse(&space, rng.random(), 0.5, 12).expect("feasible"))
                .collect();
            (space, OperatorFamily::new(cols).expect("nonempty"))
        })
        .collect()
}

/// Three seeded sets of shear families on a `16 × 16` grid.
pub fn directional_fixtures(seed: u64) -> Result<Vec<Vec<ShearFamily>>> {
    let space = build_space(2, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: [&[(i64, bool)]; 3] = [&[(0, false), (1, false)], &[(1, false), (3, false), (-5, true)], &[(2, false), (7, false), (16, false), (4, true)]];
    specs
        .iter()
        .map(|dirs| {
            dirs.iter()
                .map(|&(a, swap)| {
                    let d = ShearDirection::new(&space, a, swap)?;
                    build_shear_family(&space, d, rng.random(), 0.5)
                })
                .collect()
        })
        .collect()
}
