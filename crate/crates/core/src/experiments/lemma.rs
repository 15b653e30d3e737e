use crate::collections::{tower_cubes, ChildSelector, SparseCollection};
use crate::error::{Error, Result};
use crate::experiments::report::ExperimentReport;
use crate::norms::strong_norm_exact;
use crate::operators::{AlphaOp, AlphaSpec, SparseOp};
use crate::space::{build_space, DyadicSpace};

/// A seeded tower of the given depth from the root, with `G(R)` the first
/// descendant cube of `R` `k` levels down (so `δ = 2^{-dk}`).
pub fn lemma_operator(space: &DyadicSpace, tower_depth: u32, k: u32, seed: u64) -> Result<AlphaSpec> {
    if tower_depth + k > space.depth() {
        return Err(Error::construction(format!(
            "δ = 2^-{} needs depth {} but the space has {}",
            k * space.dim(),
            tower_depth + k,
            space.depth()
        )));
    }
    let cubes = tower_cubes(space, &space.root(), tower_depth, ChildSelector::Seeded(seed))?;
    let base = SparseCollection::from_sets(cubes.iter().map(|c| space.cube_set(c)).collect())?;
    let images = cubes
        .iter()
        .map(|c| Some(space.cube_set(&c.first_descendant(k))))
        .collect();
    let delta = 1.0 / (1u64 << (k * space.dim())) as f64;
    AlphaSpec::new(base, images, 1.0, delta)
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `δ = 2^{-k}` from a user value; anything else is rejected.
pub fn delta_exponent(delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("δ must lie in (0, 1], got {delta}")));
    }
    let k = -delta.log2();
    if k.fract() != 0.0 {
        return Err(Error::domain(format!("δ must be a power of 1/2, got {delta}")));
    }
    Ok(k as u32)
}

/// Exact `L²` norms of `Λ¹_{𝒮,𝒮'}` on a depth-`tower_depth` tower, one row
/// per `δ`, plus the `G = id` check against the plain sparse operator.
pub fn lemma_delta_experiment(p: f64, deltas: &[f64], tower_depth: u32, seed: u64) -> Result<ExperimentReport> {
    if p != 2.0 {
        return Err(Error::Unsupported(format!("the lemma study computes exact norms at p = 2, got {p}")));
    }
    let mut ks = deltas.iter().map(|&d| delta_exponent(d)).collect::<Result<Vec<_>>>()?;
    ks.sort_unstable();
    ks.dedup();
    let k_max = ks.last().copied().unwrap_or(0);
    let space = build_space(1, tower_depth + k_max)?;
    let mut report = ExperimentReport::new("lemma", seed, &["delta", "k", "norm", "norm_over_delta_pow"]);
    report.parameters.push("p", p);
    report.parameters.push("tower_depth", tower_depth);
    report.parameters.push("depth", space.depth());

    let identity = lemma_operator(&space, tower_depth, 0, seed)?;
    let plain = strong_norm_exact(&SparseOp { space, sets: identity.base().sets() }, 2.0)?.value;
    let via_alpha = strong_norm_exact(&AlphaOp { space, spec: &identity }, 2.0)?.value;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    // rows by increasing δ
    for &k in ks.iter().rev() {
        let spec = lemma_operator(&space, tower_depth, k, seed)?;
        let norm = strong_norm_exact(&AlphaOp { space, spec: &spec }, 2.0)?.value;
        let delta = spec.delta();
        if k > 0 {
            xs.push(delta.ln());
            ys.push(norm.ln());
        }
        report.push_row(vec![delta.into(), k.into(), norm.into(), (norm / delta.powf(1.0 / p)).into()]);
    }
    let slope = if xs.len() >= 2 { fit_slope(&xs, &ys) } else { f64::NAN };
    let matches = plain.to_bits() == via_alpha.to_bits();
    report.summary.push("slope", slope);
    report.summary.push("plain_norm", plain);
    report.summary.push("identity_matches", matches);
    report.passed = matches && (0.4..=0.6).contains(&slope);
    Ok(report)
}
