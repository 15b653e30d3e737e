use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::collections::{cover_shifted_grids, dominate_by_martingale, verify_laminar, COVER_CONSTANT};
use crate::error::Result;
use crate::experiments::fixtures::{dyadic_field, IntervalFixture};
use crate::experiments::report::ExperimentReport;
use crate::operators::apply_sparse;
use crate::space::CellFunction;

/// `max Λ_𝒮 f / Σ_i Λ_{𝒮_i} f` over cells with a positive denominator, for
/// `f ≡ 1` and `draws` seeded fields per fixture.
pub fn domination_experiment(fixtures: &[IntervalFixture], draws: usize, seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(
        "dominate",
        seed,
        &["fixture", "intervals", "collections", "draw", "max_ratio", "all_laminar", "pass"],
    );
    report.parameters.push("draws", draws);
    report.parameters.push("constant", COVER_CONSTANT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for fx in fixtures {
        let cover = cover_shifted_grids(&fx.space, &fx.intervals)?;
        let dom = dominate_by_martingale(&fx.intervals, &cover)?;
        let laminar = dom
            .collections()
            .iter()
            .all(|c| verify_laminar(c.sets().to_vec()).is_ok());
        let fs: Vec<CellFunction<f64>> = std::iter::once(CellFunction::constant(fx.space, 1.0))
            .chain((0..draws).map(|_| dyadic_field(&fx.space, &mut rng)))
            .collect();
        for (k, f) in fs.iter().enumerate() {
            let lhs = apply_sparse(&fx.intervals, f);
            let rhs = dom.dominating_sum(f);
            let mut worst: f64 = 0.0;
            let mut ok = true;
            for (a, b) in lhs.values().iter().zip(rhs.values()) {
                if *b > 0.0 {
                    worst = worst.max(a / b);
                }
                ok &= *a <= COVER_CONSTANT as f64 * b;
            }
            report.passed &= ok && laminar;
            report.push_row(vec![
                fx.name.clone().into(),
                fx.intervals.len().into(),
                dom.collections().len().into(),
                k.into(),
                worst.into(),
                laminar.into(),
                ok.into(),
            ]);
        }
    }
    Ok(report)
}
