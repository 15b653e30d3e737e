use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collections::{build_random_sparse, carleson_constant, max_sparsity, verify_laminar, Gamma};
use crate::error::{Error, Result};
use crate::experiments::fixtures::dyadic_function;
use crate::experiments::report::ExperimentReport;
use crate::experiments::tail::tail_point;
use crate::operators::{apply_alpha_sparse, apply_max_sparse, apply_maximal, apply_sparse, AlphaSpec, OperatorFamily};
use crate::oracle;
use crate::space::build_space;

/// Largest space the exact suite accepts.
pub const VERIFY_MAX_CELLS: usize = 1 << 10;

/// Oracle equivalence, laminarity/duality and tail checks on seeded families
/// of one space.
pub fn verify_suite(dim: u32, depth: u32, seed: u64, cases: usize) -> Result<ExperimentReport> {
    let space = build_space(dim, depth)?;
    if space.cell_count() > VERIFY_MAX_CELLS {
        return Err(Error::domain(format!(
            "the exact suite runs on at most {VERIFY_MAX_CELLS} cells, got {}",
            space.cell_count()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0usize; 7];
    let names = [
        "oracle-sparse",
        "oracle-maximal",
        "oracle-max-sparse",
        "oracle-alpha",
        "laminar",
        "carleson-duality",
        "tail",
    ];
    let mut checks = [0usize; 7];
    for _ in 0..cases {
        let n = 1 + rng.random_range(0..3usize);
        let target = [0.5, 0.25, 0.4][rng.random_range(0..3usize)];
        let count = 2 + rng.random_range(0..8usize);
        let cols = (0..n)
            .map(|_| build_random_sparse(&space, rng.random(), target, count))
            .collect::<Result<Vec<_>>>()?;
        let f = dyadic_function(&space, &mut rng);
        let fam = OperatorFamily::new(cols.clone())?;
        let first = &cols[0];

        checks[0] += 1;
        counts[0] += usize::from(apply_sparse(first.sets(), &f).values() != oracle::sparse(first.sets(), &f).as_slice());
        checks[1] += 1;
        counts[1] += usize::from(apply_maximal(first.sets(), &f).values() != oracle::maximal(first.sets(), &f).as_slice());
        checks[2] += 1;
        counts[2] += usize::from(apply_max_sparse(&fam, &f).values() != oracle::max_sparse(&cols, &f).as_slice());
        let spec = AlphaSpec::identity(first.clone(), 1.0)?;
        checks[3] += 1;
        counts[3] += usize::from(apply_alpha_sparse(&spec, &f).values() != oracle::alpha_one(&spec, &f).as_slice());

        for c in &cols {
            checks[4] += 1;
            counts[4] += usize::from(verify_laminar(c.sets().to_vec()).is_err() || !c.verify_portions());
            checks[5] += 1;
            let (g, _) = max_sparsity(c.laminar());
            let k = carleson_constant(c.laminar());
            let exact = oracle::max_sparsity(c.sets());
            let same = g == Gamma::new(*k.denom(), *k.numer())
                && exact == crate::scalar::Rational::new((*g.numer()).into(), (*g.denom()).into());
            counts[5] += usize::from(!same);
            for lambda in [0.0, 1.0, 1.5, 2.0, 3.0] {
                checks[6] += 1;
                counts[6] += usize::from(!tail_point(&space, c, None, lambda).holds);
            }
        }
    }
    let mut report = ExperimentReport::new("verify", seed, &["check", "cases", "failures", "pass"]);
    report.parameters.push("d", dim);
    report.parameters.push("L", depth);
    report.parameters.push("cases", cases);
    for i in 0..names.len() {
        report.push_row(vec![names[i].into(), checks[i].into(), counts[i].into(), (counts[i] == 0).into()]);
    }
    report.passed = counts.iter().all(|&c| c == 0);
    Ok(report)
}
