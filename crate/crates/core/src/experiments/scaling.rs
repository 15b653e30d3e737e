use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collections::{build_random_sparse, build_tower, ChildSelector, SparseCollection};
use crate::directional::{build_shear_family, ShearDirection};
use crate::error::{Error, Result};
use crate::experiments::report::ExperimentReport;
use crate::norms::{strong_norm_witness, weak_norm_witness, SearchConfig};
use crate::operators::{MaxSparseOp, MaximalOp, OperatorFamily};
use crate::space::{build_space, DyadicSpace};
use crate::collections::log_plus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Shear families of slopes `1/2^L, …, N/2^L` on a `256 × 256` grid.
    Shear,
    /// Seeded laminar families of dyadic squares on a `32 × 32` grid.
    Axis,
    /// One tower repeated `N` times.
    Repeated,
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shear" => Ok(Ensemble::Shear),
            "axis" => Ok(Ensemble::Axis),
            "repeated" => Ok(Ensemble::Repeated),
            other => Err(Error::domain(format!("unknown ensemble '{other}' (shear, axis, repeated)"))),
        }
    }
}

impl Ensemble {
    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Shear => "shear",
            Ensemble::Axis => "axis",
            Ensemble::Repeated => "repeated",
        }
    }
}

/// Band density of the shear ensemble.
pub const SHEAR_DENSITY: f64 = 0.25;

/// The first `n_max` collections of an ensemble; row `N` uses a prefix.
pub fn build_ensemble(ensemble: Ensemble, n_max: usize, seed: u64) -> Result<(DyadicSpace, Vec<SparseCollection>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match ensemble {
        Ensemble::Shear => {
            let space = build_space(2, 8)?;
            if n_max > space.side() {
                return Err(Error::domain(format!("the shear ensemble has {} slopes", space.side())));
            }
            let cols = (1..=n_max as i64)
                .map(|a| {
                    let d = ShearDirection::new(&space, a, false)?;
                    Ok(build_shear_family(&space, d, rng.random(), SHEAR_DENSITY)?.collection().clone())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((space, cols))
        }
        Ensemble::Axis => {
            let space = build_space(2, 5)?;
            let cols = (0..n_max)
                .map(|_| build_random_sparse(&space, rng.random(), 0.5, 48))
                .collect::<Result<Vec<_>>>()?;
            Ok((space, cols))
        }
        Ensemble::Repeated => {
            let space = build_space(1, 10)?;
            let t = build_tower(&space, &space.root(), 10, ChildSelector::Seeded(rng.random()))?;
            Ok((space, vec![t; n_max]))
        }
    }
}

/// Search settings for the scaling rows: spaces are large, so the ascent is short.
pub fn scaling_search(seed: u64) -> SearchConfig {
    SearchConfig {
        seed,
        random_candidates: 4,
        max_set_candidates: 96,
        refinements: 8,
        max_trials: 48,
        max_sweeps: 1,
        epsilon: 0.1,
    }
}

/// Witnessed weak and strong norms of `Λ_𝔊` and `𝓜_𝒮` for each `N`, and the
/// ratios against `log_+ N` (strong: `log_+ N^{max(1, 1/(p-1))}`).
pub fn scaling_experiment(p: f64, ns: &[usize], ensemble: Ensemble, seed: u64) -> Result<ExperimentReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("the scaling study needs 1 < p < ∞, got {p}")));
    }
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::domain("N values must be positive"));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let (space, cols) = build_ensemble(ensemble, *ns.last().unwrap(), seed)?;
    let config = scaling_search(seed);
    let exponent = (1.0f64).max(1.0 / (p - 1.0));
    let mut report = ExperimentReport::new(
        "scaling",
        seed,
        &[
            "n",
            "log_plus_n",
            "weak_max_sparse",
            "weak_maximal",
            "strong_max_sparse",
            "strong_maximal",
            "r_weak",
            "r_strong",
        ],
    );
    report.parameters.push("p", p);
    report.parameters.push("ensemble", ensemble.name());
    report.parameters.push("d", space.dim());
    report.parameters.push("L", space.depth());
    let mut r_weak_all = Vec::new();
    let mut bound: f64 = 0.0;
    for &n in &ns {
        let family = OperatorFamily::new(cols[..n].to_vec())?;
        let big = MaxSparseOp { space, family: &family };
        let small = MaximalOp { space, sets: family.union() };
        let wl = weak_norm_witness(&big, p, &config)?.value;
        let wm = weak_norm_witness(&small, p, &config)?.value;
        let sl = strong_norm_witness(&big, p, &config)?.value;
        let sm = strong_norm_witness(&small, p, &config)?.value;
        let lp = log_plus(n);
        let r_weak = wl / (lp * wm);
        let r_strong = sl / (lp.powf(exponent) * sm);
        bound = bound.max(r_weak).max(r_strong);
        r_weak_all.push(r_weak);
        report.push_row(vec![
            n.into(),
            lp.into(),
            wl.into(),
            wm.into(),
            sl.into(),
            sm.into(),
            r_weak.into(),
            r_strong.into(),
        ]);
    }
    let flat = r_weak_all.last().unwrap() <= &(2.0 * r_weak_all[0]);
    report.summary.push("max_ratio", bound);
    report.summary.push("r_weak_flat", flat);
    report.passed = flat;
    Ok(report)
}
