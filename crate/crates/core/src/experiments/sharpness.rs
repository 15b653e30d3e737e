use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collections::{build_tower, ChildSelector, MeasSet};
use crate::error::{Error, Result};
use crate::experiments::report::ExperimentReport;
use crate::norms::weak_ratio;
use crate::operators::{apply_max_sparse, MaxSparseOp, OperatorFamily};
use crate::space::{build_space, CellFunction, DyadicSpace};

/// `N` independent seeded towers of depth `m` inside `Q = X`, and `f = 1_Q`.
#[derive(Debug, Clone)]
pub struct Sharpness {
    pub space: DyadicSpace,
    pub n: usize,
    pub m: u32,
    pub family: OperatorFamily,
    pub f: CellFunction<f64>,
    /// Union of the innermost sets.
    pub innermost: MeasSet,
    /// `min Λ_𝔊 f` over the innermost union.
    pub min_on_union: f64,
    /// Best weak ratio of `f` over the exact `λ` grid.
    pub witness: f64,
    pub p: f64,
}

impl Sharpness {
    /// `μ(U) / μ(Q)`.
    pub fn union_fraction(&self) -> f64 {
        self.innermost.measure()
    }
}

/// Tower depth for `N` towers: `⌈log₂ N / d⌉`, so innermost sets have
/// measure at least `1 / (2^d N)`.
pub fn sharpness_depth(n: usize, dim: u32) -> u32 {
    let bits = usize::BITS - (n.max(1) - 1).leading_zeros();
    bits.div_ceil(dim)
}

pub fn sharpness_construction(space: &DyadicSpace, n: usize, p: f64, seed: u64) -> Result<Sharpness> {
    if n == 0 {
        return Err(Error::domain("N must be at least 1"));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("p must lie in [1, ∞), got {p}")));
    }
    let m = sharpness_depth(n, space.dim());
    if space.depth() < m + 2 {
        return Err(Error::domain(format!(
            "depth {} is below ⌈log₂N⌉ + 2 = {} for N = {n}",
            space.depth(),
            m + 2
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let towers = (0..n)
        .map(|_| build_tower(space, &space.root(), m, ChildSelector::Seeded(rng.random())))
        .collect::<Result<Vec<_>>>()?;
    let innermost = MeasSet::union_of(space, towers.iter().map(|t| t.sets().last().unwrap()))
        .expect("at least one tower");
    let family = OperatorFamily::new(towers)?;
    let f = CellFunction::constant(*space, 1.0);
    let g = apply_max_sparse(&family, &f);
    let min_on_union = innermost
        .cells()
        .iter()
        .map(|&c| g.values()[c as usize])
        .fold(f64::INFINITY, f64::min);
    let op = MaxSparseOp { space: *space, family: &family };
    let (witness, _) = weak_ratio(&op, &f, p)?;
    Ok(Sharpness {
        space: *space,
        n,
        m,
        family,
        f,
        innermost,
        min_on_union,
        witness,
        p,
    })
}

/// One row per `N`, on `d = 1` with depth `⌈log₂ N⌉ + 3` unless `depth` is given.
pub fn sharpness_experiment(ns: &[usize], depth: Option<u32>, ps: &[f64], seed: u64) -> Result<ExperimentReport> {
    let mut cols = vec!["n", "m", "depth", "union_fraction", "min_value"];
    let names: Vec<String> = ps.iter().map(|p| format!("witness_p{p}")).collect();
    cols.extend(names.iter().map(String::as_str));
    let mut report = ExperimentReport::new("sharpness", seed, &cols);
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    let mut previous: Vec<f64> = vec![f64::NEG_INFINITY; ps.len()];
    let mut increasing = true;
    let mut min_fraction: f64 = 1.0;
    for &n in &ns {
        let m = sharpness_depth(n, 1);
        let space = build_space(1, depth.unwrap_or(m + 3))?;
        let mut row = Vec::new();
        for (i, &p) in ps.iter().enumerate() {
            let s = sharpness_construction(&space, n, p, seed)?;
            if i == 0 {
                min_fraction = min_fraction.min(s.union_fraction());
                row.extend([n.into(), s.m.into(), space.depth().into(), s.union_fraction().into(), s.min_on_union.into()]);
            }
            increasing &= s.witness > previous[i];
            previous[i] = s.witness;
            row.push(s.witness.into());
        }
        report.push_row(row);
    }
    report.summary.push("min_union_fraction", min_fraction);
    report.summary.push("strictly_increasing", increasing);
    report.passed = increasing && min_fraction >= 0.3;
    Ok(report)
}
