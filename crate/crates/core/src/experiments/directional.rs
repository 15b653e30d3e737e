use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::directional::{verify_MV_domination, ShearFamily};
use crate::error::Result;
use crate::experiments::fixtures::{directional_fixtures, dyadic_field};
use crate::experiments::report::ExperimentReport;
use crate::space::CellFunction;

/// `𝓜_𝒮 f ≤ M_V f` on the seeded shear fixtures for `f ≡ 1`, `f ≡ 0` and
/// `draws` seeded fields.
pub fn directional_experiment(seed: u64, draws: usize) -> Result<ExperimentReport> {
    let fixtures = directional_fixtures(seed)?;
    let mut report = ExperimentReport::new(
        "directional",
        seed,
        &["fixture", "directions", "sets", "min_gamma", "draw", "equal_cells", "pass"],
    );
    report.parameters.push("draws", draws);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, fams) in fixtures.iter().enumerate() {
        let space = fams[0].space();
        let sets: usize = fams.iter().map(|f| f.sets().len()).sum();
        let min_gamma = fams
            .iter()
            .flat_map(ShearFamily::band_collections)
            .map(|c| c.gamma_f64())
            .fold(1.0, f64::min);
        let fs: Vec<CellFunction<f64>> = [CellFunction::constant(space, 1.0), CellFunction::zeros(space)]
            .into_iter()
            .chain((0..draws).map(|_| dyadic_field(&space, &mut rng)))
            .collect();
        for (k, f) in fs.iter().enumerate() {
            let r = verify_MV_domination(fams, f);
            report.passed &= r.holds() && min_gamma >= 0.5;
            report.push_row(vec![
                i.into(),
                fams.len().into(),
                sets.into(),
                min_gamma.into(),
                k.into(),
                r.equal_cells.into(),
                r.holds().into(),
            ]);
        }
    }
    Ok(report)
}
