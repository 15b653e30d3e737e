use num_bigint::BigUint;

use crate::collections::{MeasSet, SparseCollection};
use crate::experiments::fixtures::Fixture;
use crate::experiments::report::ExperimentReport;
use crate::operators::overlap_function;
use crate::space::{distribution_count, DyadicSpace};

/// Measured `μ{Σ_{S ⊆ R_0} 1_S > λ}`, the bound `γ^{⌊λ⌋} μ(R_0)` and whether
/// the bound holds, decided exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TailPoint {
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn tail_point(space: &DyadicSpace, c: &SparseCollection, r0: Option<&MeasSet>, lambda: f64) -> TailPoint {
    let overlap = overlap_function(c.sets(), r0, *space);
    let count = distribution_count(&overlap, &lambda) as u64;
    let r0_cells = r0.map_or(space.cell_count(), MeasSet::len) as u64;
    let k = lambda.floor().max(0.0) as u32;
    let (a, b) = (*c.gamma().numer(), *c.gamma().denom());
    // count · b^k ≤ a^k · |R_0|
    let holds = BigUint::from(count) * BigUint::from(b).pow(k) <= BigUint::from(a).pow(k) * BigUint::from(r0_cells);
    let bound = c.gamma_f64().powi(k as i32) * space.measure_of(r0_cells as usize);
    TailPoint {
        measured: space.measure_of(count as usize),
        bound,
        holds,
    }
}

/// Every fixture against `R_0 = X` and every member `R_0`, for each `λ`.
pub fn tail_experiment(fixtures: &[Fixture], lambdas: &[f64], seed: u64) -> ExperimentReport {
    let mut report = ExperimentReport::new("tail", seed, &["fixture", "gamma", "r0", "lambda", "measured", "bound", "pass"]);
    report.parameters.push("fixtures", fixtures.len());
    report.parameters.push(
        "lambdas",
        lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
    );
    let mut failures = 0usize;
    let mut equalities = 0usize;
    for fx in fixtures {
        let c = &fx.collection;
        let gamma = format!("{}/{}", c.gamma().numer(), c.gamma().denom());
        let r0s: Vec<(String, Option<&MeasSet>)> = std::iter::once(("X".to_string(), None))
            .chain(c.sets().iter().enumerate().map(|(i, s)| (i.to_string(), Some(s))))
            .collect();
        for (label, r0) in &r0s {
            for &lambda in lambdas {
                let t = tail_point(&fx.space, c, *r0, lambda);
                failures += usize::from(!t.holds);
                equalities += usize::from(t.measured == t.bound);
                report.push_row(vec![
                    fx.name.clone().into(),
                    gamma.clone().into(),
                    label.clone().into(),
                    lambda.into(),
                    t.measured.into(),
                    t.bound.into(),
                    t.holds.into(),
                ]);
            }
        }
    }
    report.summary.push("failures", failures);
    report.summary.push("equalities", equalities);
    report.passed = failures == 0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::fixtures::left_tower;
    use crate::space::build_space;

    #[test]
    fn tower_tail_is_geometric() {
        let fx = left_tower(5);
        for k in 0..5 {
            let t = tail_point(&fx.space, &fx.collection, None, k as f64);
            assert_eq!(t.measured, 0.5f64.powi(k));
            assert!(t.holds);
        }
    }

    #[test]
    fn unit_constant_fails_when_children_fill_the_parent() {
        let s = build_space(1, 2).unwrap();
        let sets = vec![
            MeasSet::interval(&s, 0, 4).unwrap(),
            MeasSet::interval(&s, 0, 1).unwrap(),
            MeasSet::interval(&s, 1, 2).unwrap(),
            MeasSet::interval(&s, 2, 3).unwrap(),
        ];
        let c = SparseCollection::from_sets(sets).unwrap();
        assert_eq!((*c.gamma().numer(), *c.gamma().denom()), (4, 7));
        let t = tail_point(&s, &c, None, 1.0);
        assert_eq!(t.measured, 0.75);
        assert!(!t.holds);
        assert!(t.measured <= 2.0 * t.bound);
    }
}
