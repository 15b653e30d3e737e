//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Set `SPARSELAB_BLESS=1` to rewrite the scaling golden file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sparselab::collections::{cover_shifted_grids, dominate_by_martingale, generation_cells, verify_laminar, COVER_CONSTANT};
use sparselab::experiments::fixtures::{
    directional_fixtures, dyadic_field, dyadic_function, family_fixtures, interval_fixtures, left_tower, oracle_cases,
    sparse_fixtures, Fixture,
};
use sparselab::experiments::{
    lemma_delta_experiment, scaling_experiment, sharpness_construction, sharpness_depth, tail_experiment, tail_point,
    Ensemble, Value,
};
use sparselab::norms::DEFAULT_SEED;
use sparselab::operators::{apply_alpha_sparse, apply_max_sparse, apply_maximal, apply_sparse, verify_level_cover};
use sparselab::scalar::rational;
use sparselab::space::distinct_abs_values;
use sparselab::{build_space, oracle, CellFunction, Rational, Scalar};

const SEED: u64 = DEFAULT_SEED;
const SCALING_NS: [usize; 8] = [2, 4, 8, 16, 32, 64, 128, 256];
const LEMMA_RANGE: (f64, f64) = (0.4, 0.6);
const SHARPNESS_FRACTION: f64 = 0.3;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn measure(cells: usize, total: usize) -> Rational {
    rational(cells as i64, total as i64)
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(rational(1, 1), |acc, _| acc * x.clone())
}

fn gamma_rational(f: &Fixture) -> Rational {
    let g = f.collection.gamma();
    Rational::new(BigInt::from(*g.numer()), BigInt::from(*g.denom()))
}

fn nonneg(f: &CellFunction<Rational>) -> CellFunction<Rational> {
    f.map(|x| x.abs_val())
}

fn oracle_equivalence() -> Check {
    let cases = oracle_cases(SEED, 50);
    for (i, c) in cases.iter().enumerate() {
        ensure(c.space.cell_count() <= 256, || format!("case {i} exceeds 2^8 cells"))?;
        let first = c.family.collections()[0].sets();
        ensure(apply_sparse(first, &c.f).values() == oracle::sparse(first, &c.f).as_slice(), || {
            format!("case {i}: sparse operator differs")
        })?;
        ensure(apply_maximal(first, &c.f).values() == oracle::maximal(first, &c.f).as_slice(), || {
            format!("case {i}: maximal operator differs")
        })?;
        ensure(
            apply_max_sparse(&c.family, &c.f).values() == oracle::max_sparse(c.family.collections(), &c.f).as_slice(),
            || format!("case {i}: maximal sparse operator differs"),
        )?;
        ensure(apply_alpha_sparse(&c.alpha, &c.f).values() == oracle::alpha_one(&c.alpha, &c.f).as_slice(), || {
            format!("case {i}: restricted sparse operator differs")
        })?;
    }
    Ok(format!("{} cases, 4 operators, exact", cases.len()))
}

fn generation_bound() -> Check {
    let fixtures = sparse_fixtures(SEED);
    let mut checks = 0usize;
    for fx in &fixtures {
        let total = fx.space.cell_count();
        let g = gamma_rational(fx);
        let sets = fx.collection.sets();
        for (r_idx, r) in sets.iter().enumerate() {
            let mu_r = measure(r.len(), total);
            for j in 0..=sets.len() {
                let exact = oracle::generation_measure(sets, r, j, &fx.space);
                let fast = measure(generation_cells(fx.collection.laminar(), r_idx, j), total);
                ensure(exact == fast, || format!("{}: generation {j} of set {r_idx} disagrees", fx.name))?;
                ensure(exact <= pow(&g, j) * mu_r.clone(), || {
                    format!("{}: μ(G_{j}) = {exact} exceeds γ^{j} μ(R) for set {r_idx}", fx.name)
                })?;
                checks += 1;
                if exact == rational(0, 1) {
                    break;
                }
            }
        }
    }
    let half = rational(1, 2);
    let mut towers = 0usize;
    for m in 1..=8u32 {
        let fx = left_tower(m);
        let total = fx.space.cell_count();
        let g = gamma_rational(&fx);
        let sets = fx.collection.sets();
        for (r_idx, r) in sets.iter().enumerate() {
            let mu_r = measure(r.len(), total);
            for j in 0..sets.len() - r_idx {
                let exact = oracle::generation_measure(sets, r, j, &fx.space);
                ensure(exact == pow(&half, j) * mu_r.clone(), || {
                    format!("{}: μ(G_{j}) = {exact} is not 2^-{j} μ(R) for set {r_idx}", fx.name)
                })?;
                ensure(exact <= pow(&g, j) * mu_r.clone(), || format!("{}: bound fails", fx.name))?;
                towers += 1;
            }
        }
    }
    Ok(format!("{checks} (R, j) pairs on {} families; {towers} tower equalities at rate 1/2", fixtures.len()))
}

fn exponential_tail() -> Check {
    let mut fixtures = sparse_fixtures(SEED);
    fixtures.extend((1..=8).map(left_tower));
    let lambdas: Vec<f64> = (0..=16).map(|i| i as f64 / 2.0).collect();
    let report = tail_experiment(&fixtures, &lambdas, SEED);
    ensure(report.passed, || format!("tail bound fails: {}", report.headline()))?;
    let mut equalities = 0usize;
    for m in 1..=8u32 {
        let fx = left_tower(m);
        for k in 0..m {
            let t = tail_point(&fx.space, &fx.collection, None, k as f64);
            ensure(t.measured == 0.5f64.powi(k as i32), || {
                format!("tower-{m}: μ{{overlap > {k}}} = {} instead of 2^-{k}", t.measured)
            })?;
            equalities += 1;
        }
    }
    Ok(format!("{} rows, {equalities} tower equalities", report.rows.len()))
}

fn pointwise_dominations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sparse_checks = 0usize;
    for fx in sparse_fixtures(SEED) {
        for _ in 0..10 {
            let f = nonneg(&dyadic_function(&fx.space, &mut rng));
            let sets = fx.collection.sets();
            ensure(apply_maximal(sets, &f).le_pointwise(&apply_sparse(sets, &f)), || {
                format!("{}: maximal exceeds sparse operator", fx.name)
            })?;
            sparse_checks += 1;
        }
    }
    let fixtures = directional_fixtures(SEED).map_err(|e| e.to_string())?;
    let mut mv_checks = 0usize;
    for (i, fams) in fixtures.iter().enumerate() {
        let space = fams[0].space();
        for k in 0..10 {
            let f = nonneg(&dyadic_function(&space, &mut rng));
            let r = sparselab::directional::verify_MV_domination(fams, &f);
            ensure(r.holds(), || format!("directional fixture {i}, draw {k}: violated at {:?}", r.violation))?;
            mv_checks += 1;
        }
    }
    Ok(format!("{sparse_checks} sparse and {mv_checks} directional draws, exact"))
}

fn martingale_domination() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let constant = rational(COVER_CONSTANT as i64, 1);
    let mut collections = 0usize;
    for fx in interval_fixtures(SEED) {
        let cover = cover_shifted_grids(&fx.space, &fx.intervals).map_err(|e| e.to_string())?;
        let dom = dominate_by_martingale(&fx.intervals, &cover).map_err(|e| e.to_string())?;
        for c in dom.collections() {
            ensure(verify_laminar(c.sets().to_vec()).is_ok(), || format!("{}: collection not laminar", fx.name))?;
        }
        collections += dom.collections().len();
        let fs = std::iter::once(CellFunction::constant(fx.space, rational(1, 1)))
            .chain((0..10).map(|_| nonneg(&dyadic_function(&fx.space, &mut rng))));
        for (k, f) in fs.enumerate() {
            let lhs = apply_sparse(&fx.intervals, &f);
            let rhs = dom.dominating_sum(&f);
            let ok = lhs
                .values()
                .iter()
                .zip(rhs.values())
                .all(|(a, b)| *a <= constant.clone() * b.clone());
            ensure(ok, || format!("{}, draw {k}: domination fails", fx.name))?;
        }
    }
    Ok(format!("4 interval families, {collections} martingale collections, exact"))
}

fn level_cover() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut levels = 0usize;
    for (i, (space, family)) in family_fixtures(SEED).iter().enumerate() {
        for _ in 0..2 {
            let f = dyadic_field(space, &mut rng);
            let g = apply_max_sparse(family, &f);
            for lambda in distinct_abs_values(&g).into_iter().filter(|&v| v > 0.0) {
                for delta in [0.5, 0.25] {
                    let r = verify_level_cover(family, &f, lambda, delta).map_err(|e| e.to_string())?;
                    ensure(r.covered(), || {
                        format!("fixture {i}, λ = {lambda}, δ = {delta}: {} cells uncovered", r.uncovered.len())
                    })?;
                    levels += 1;
                }
            }
        }
    }
    Ok(format!("{levels} (λ, δ) levels, no uncovered cells"))
}

fn lemma_scaling() -> Check {
    let deltas: Vec<f64> = (1..=7).map(|k| 0.5f64.powi(k)).collect();
    let report = lemma_delta_experiment(2.0, &deltas, 12, SEED).map_err(|e| e.to_string())?;
    let slope = report.summary.get("slope").and_then(Value::as_f64).unwrap_or(f64::NAN);
    let identity = report.summary.get("identity_matches").and_then(Value::as_bool).unwrap_or(false);
    ensure(identity, || "δ = 1 does not reproduce the plain norm".into())?;
    ensure((LEMMA_RANGE.0..=LEMMA_RANGE.1).contains(&slope), || format!("slope {slope} outside range"))?;
    Ok(format!("slope {slope:.5}, identity exact"))
}

fn sharpness() -> Check {
    let mut parts = Vec::new();
    for p in [1.0, 2.0] {
        let mut previous = f64::NEG_INFINITY;
        for m in 2..=8u32 {
            let n = 1usize << m;
            let space = build_space(1, sharpness_depth(n, 1) + 3).map_err(|e| e.to_string())?;
            let s = sharpness_construction(&space, n, p, SEED).map_err(|e| e.to_string())?;
            let need = (m + 1) as f64;
            ensure(s.min_on_union >= need, || format!("m = {m}: Λ f = {} on the union", s.min_on_union))?;
            ensure(s.union_fraction() >= SHARPNESS_FRACTION, || {
                format!("m = {m}: union fraction {}", s.union_fraction())
            })?;
            ensure(s.witness >= SHARPNESS_FRACTION.powf(1.0 / p) * need, || {
                format!("m = {m}, p = {p}: witness {}", s.witness)
            })?;
            ensure(s.witness > previous, || format!("m = {m}, p = {p}: witness did not increase"))?;
            previous = s.witness;
        }
        parts.push(format!("p={p}: {previous:.4}"));
    }
    Ok(format!("m = 2..8, final witnesses {}", parts.join(", ")))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn norm_scaling() -> Check {
    let report = scaling_experiment(2.0, &SCALING_NS, Ensemble::Shear, SEED).map_err(|e| e.to_string())?;
    let csv = report.to_csv();
    let csv_path = golden_dir().join("scaling_shear_p2.csv");
    let bound_path = golden_dir().join("scaling_shear_p2.bound");
    if std::env::var_os("SPARSELAB_BLESS").is_some() {
        fs::write(&csv_path, &csv).map_err(|e| e.to_string())?;
    }
    let golden = fs::read_to_string(&csv_path).map_err(|e| format!("{}: {e}", csv_path.display()))?;
    ensure(golden == csv, || "regenerated table differs from the golden file".into())?;
    let bound: f64 = fs::read_to_string(&bound_path)
        .map_err(|e| format!("{}: {e}", bound_path.display()))?
        .trim()
        .parse()
        .map_err(|e| format!("bad bound: {e}"))?;
    let weak = report.column_f64("r_weak");
    let strong = report.column_f64("r_strong");
    let worst = weak.iter().chain(&strong).fold(0.0f64, |a, &b| a.max(b));
    ensure(worst <= bound, || format!("ratio {worst} exceeds bound {bound}"))?;
    let (first, last) = (weak[0], *weak.last().unwrap());
    ensure(last <= 2.0 * first, || format!("r_weak rises from {first} to {last}"))?;
    Ok(format!("byte match, max ratio {worst:.4} ≤ {bound}, r_weak {first:.4} → {last:.4}"))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sparselab"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout, fs::read(args.last().unwrap()).unwrap_or_default()))
}

fn reproducibility() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 9] = [
        &["verify", "--depth", "5"],
        &["tail", "--depth", "6"],
        &["scaling", "--n", "2,4"],
        &["sharpness", "--n", "4,8,16"],
        &["lemma", "--delta", "0.5,0.25,0.125"],
        &["dominate"],
        &["directional"],
        &["tail", "--dim", "2", "--depth", "3", "--format", "json"],
        &["scaling", "--ensemble", "repeated", "--n", "2,4", "--format", "json"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{}-{k}", args.join("_").replace(',', "-")));
            let path = path.to_str().unwrap().to_owned();
            let mut full: Vec<&str> = args.to_vec();
            full.extend(["--seed", "7", "--out", &path]);
            let (code, _, body) = run_cli(&full)?;
            ensure(code == 0 || code == 1, || format!("`{}` exited {code}", args.join(" ")))?;
            outputs.push((code, body));
        }
        ensure(!outputs[0].1.is_empty() && outputs[0] == outputs[1], || {
            format!("`{}` is not reproducible", args.join(" "))
        })?;
    }
    Ok(format!("{} invocations, byte-identical", runs.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "oracle equivalence", budget: Duration::from_secs(10), run: oracle_equivalence },
        Criterion { id: 2, name: "generation bound", budget: Duration::from_secs(5), run: generation_bound },
        Criterion { id: 3, name: "exponential tail", budget: Duration::from_secs(5), run: exponential_tail },
        Criterion { id: 4, name: "pointwise dominations", budget: Duration::from_secs(10), run: pointwise_dominations },
        Criterion { id: 5, name: "martingale domination", budget: Duration::from_secs(5), run: martingale_domination },
        Criterion { id: 6, name: "level-set cover", budget: Duration::from_secs(20), run: level_cover },
        Criterion { id: 7, name: "restricted operator scaling", budget: Duration::from_secs(60), run: lemma_scaling },
        Criterion { id: 8, name: "sharpness", budget: Duration::from_secs(60), run: sharpness },
        Criterion { id: 9, name: "norm scaling", budget: Duration::from_secs(300), run: norm_scaling },
        Criterion { id: 10, name: "cli reproducibility", budget: Duration::from_secs(120), run: reproducibility },
    ];
    let only: Vec<u32> = std::env::var("SPARSELAB_CRITERIA")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect())
        .unwrap_or_default();
    let mut failed = 0;
    for c in &criteria {
        if !only.is_empty() && !only.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget of {}s", c.budget.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {:<28} {status} {:>8.2}s  {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
