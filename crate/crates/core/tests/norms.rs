use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sparselab::collections::{build_random_sparse, build_tower, full_binary, ChildSelector};
use sparselab::experiments::fixtures::dyadic_field;
use sparselab::norms::{
    strong_norm_exact, strong_norm_witness, strong_ratio, weak_norm_witness, weak_ratio, NormKind, SearchConfig,
};
use sparselab::operators::{AlphaOp, AlphaSpec, MaxSparseOp, MaximalOp, Operator, OperatorFamily, SparseOp};
use sparselab::{build_space, CellFunction, DyadicSpace, Error};

/// Largest singular value of the dense matrix of `op`.
fn dense_norm(op: &dyn Operator, space: &DyadicSpace) -> f64 {
    let n = space.cell_count();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = op.apply(&CellFunction::new(*space, e).unwrap());
        for i in 0..n {
            m[(i, j)] = col.values()[i];
        }
    }
    m.singular_values().max()
}

fn quick() -> SearchConfig {
    SearchConfig { max_trials: 256, max_sweeps: 2, ..SearchConfig::default() }
}

#[test]
fn exact_norm_of_the_full_binary_family() {
    let space = build_space(1, 4).unwrap();
    let c = full_binary(&space, 4);
    let op = SparseOp { space, sets: c.sets() };
    let exact = strong_norm_exact(&op, 2.0).unwrap();
    assert_eq!(exact.kind, NormKind::StrongExact);
    assert!((exact.value - dense_norm(&op, &space)).abs() < 1e-10);
}

#[test]
fn exact_norm_rejects_nonlinear_operators_and_other_exponents() {
    let space = build_space(1, 3).unwrap();
    let c = full_binary(&space, 3);
    assert!(matches!(strong_norm_exact(&MaximalOp { space, sets: c.sets() }, 2.0), Err(Error::Unsupported(_))));
    assert!(matches!(strong_norm_exact(&SparseOp { space, sets: c.sets() }, 3.0), Err(Error::Unsupported(_))));
}

#[test]
fn witnesses_reevaluate_to_their_values() {
    let space = build_space(2, 3).unwrap();
    let c = build_random_sparse(&space, 11, 0.5, 8).unwrap();
    let op = MaximalOp { space, sets: c.sets() };
    for est in [strong_norm_witness(&op, 2.0, &quick()).unwrap(), weak_norm_witness(&op, 1.0, &quick()).unwrap()] {
        let again = est.reevaluate(&op).unwrap().unwrap();
        assert_eq!(again, est.value);
        assert!(est.value >= 1.0 - 1e-12);
    }
}

#[test]
fn tower_weak_norm_grows_with_depth() {
    let mut previous = 0.0;
    for m in 2..=6 {
        let space = build_space(1, m).unwrap();
        let t = build_tower(&space, &space.root(), m, ChildSelector::First).unwrap();
        let w = weak_norm_witness(&SparseOp { space, sets: t.sets() }, 1.0, &quick()).unwrap().value;
        assert!(w > previous);
        previous = w;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_norm_matches_dense_svd(depth in 2u32..=6, seed in any::<u64>(), count in 1usize..10) {
        let space = build_space(1, depth).unwrap();
        let Ok(c) = build_random_sparse(&space, seed, 0.25, count) else {
            return Err(TestCaseError::reject("infeasible family"));
        };
        let op = SparseOp { space, sets: c.sets() };
        let exact = strong_norm_exact(&op, 2.0).unwrap().value;
        prop_assert!((exact - dense_norm(&op, &space)).abs() <= 1e-10 * exact.max(1.0));
        let witness = strong_norm_witness(&op, 2.0, &quick()).unwrap().value;
        prop_assert!(witness <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn restricted_and_single_member_families_agree_with_dense(depth in 3u32..=6, seed in any::<u64>()) {
        let space = build_space(1, depth).unwrap();
        let t = build_tower(&space, &space.root(), depth - 1, ChildSelector::Seeded(seed)).unwrap();
        let spec = AlphaSpec::identity(t.clone(), 1.0).unwrap();
        let alpha = AlphaOp { space, spec: &spec };
        let fam = OperatorFamily::new(vec![t]).unwrap();
        let single = MaxSparseOp { space, family: &fam };
        for op in [&alpha as &dyn Operator, &single] {
            let exact = strong_norm_exact(op, 2.0).unwrap().value;
            prop_assert!((exact - dense_norm(op, &space)).abs() <= 1e-10 * exact.max(1.0));
        }
    }

    #[test]
    fn weak_ratio_never_exceeds_strong_ratio(depth in 2u32..=6, seed in any::<u64>(), p in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)]) {
        let space = build_space(1, depth).unwrap();
        let Ok(c) = build_random_sparse(&space, seed, 0.5, 6) else {
            return Err(TestCaseError::reject("infeasible family"));
        };
        let f = dyadic_field(&space, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(f.values().iter().any(|&v| v > 0.0));
        for op in [&SparseOp { space, sets: c.sets() } as &dyn Operator, &MaximalOp { space, sets: c.sets() }] {
            let (weak, _) = weak_ratio(op, &f, p).unwrap();
            let strong = strong_ratio(op, &f, p).unwrap();
            prop_assert!(weak <= strong * (1.0 + 1e-12));
        }
    }
}
