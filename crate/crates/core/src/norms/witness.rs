use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::norms::{NormEstimate, NormKind};
use crate::operators::Operator;
use crate::space::{lp_norm, CellFunction, DyadicSpace};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Knobs of the witness search. Everything is deterministic given `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Seeded uniform `[0,1)` fields among the starting candidates.
    pub random_candidates: usize,
    /// Cap on indicator candidates drawn from dyadic cubes and operator sets.
    pub max_set_candidates: usize,
    /// Level sets of the best output tried as refinements.
    pub refinements: usize,
    /// Coordinate-ascent evaluations.
    pub max_trials: usize,
    pub max_sweeps: usize,
    pub epsilon: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: DEFAULT_SEED,
            random_candidates: 8,
            max_set_candidates: 256,
            refinements: 8,
            max_trials: 2048,
            max_sweeps: 4,
            epsilon: 0.1,
        }
    }
}

/// `‖Tf‖_p / ‖f‖_p`.
pub fn strong_ratio(op: &dyn Operator, f: &CellFunction<f64>, p: f64) -> Result<f64> {
    let nf = lp_norm(f, p)?;
    if nf == 0.0 {
        return Err(Error::domain("the zero function is not a witness"));
    }
    Ok(lp_norm(&op.apply(f), p)? / nf)
}

/// `max_λ λ μ{Tf > λ}^{1/p} / ‖f‖_p` over `λ` just below each output value,
/// with the maximizing `λ`.
pub fn weak_ratio(op: &dyn Operator, f: &CellFunction<f64>, p: f64) -> Result<(f64, f64)> {
    let nf = lp_norm(f, p)?;
    if nf == 0.0 {
        return Err(Error::domain("the zero function is not a witness"));
    }
    Ok(weak_of_output(op.apply(f).values(), op.space(), p, nf))
}

fn weak_of_output(tf: &[f64], space: DyadicSpace, p: f64, nf: f64) -> (f64, f64) {
    let mut vals: Vec<f64> = tf.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut best = (0.0, 0.0);
    let mut i = 0;
    while i < vals.len() {
        let v = vals[i];
        while i < vals.len() && vals[i] == v {
            i += 1;
        }
        let lambda = v.next_down();
        let value = lambda * space.measure_of(i).powf(1.0 / p) / nf;
        if value > best.0 {
            best = (value, lambda);
        }
    }
    best
}

/// Starting candidates in a fixed order: the constant, corner cubes of every
/// level, all cubes of the coarse levels, operator sets, seeded random fields.
pub fn candidate_functions(op: &dyn Operator, config: &SearchConfig) -> Vec<CellFunction<f64>> {
    let space = op.space();
    let mut out = vec![CellFunction::constant(space, 1.0)];
    for l in 0..=space.depth() {
        let c = space.root().first_descendant(l);
        out.push(CellFunction::indicator(space, &space.cube_set(&c), 1.0));
    }
    let half = config.max_set_candidates / 2;
    let mut used = 0;
    for l in 1..=space.depth() {
        let cubes = space.cubes_at(l);
        if used + cubes.len() > half {
            break;
        }
        used += cubes.len();
        for c in cubes {
            out.push(CellFunction::indicator(space, &space.cube_set(&c), 1.0));
        }
    }
    let sets = op.candidate_sets();
    let k = sets.len().min(config.max_set_candidates - used);
    for i in 0..k {
        let s = sets[i * sets.len() / k];
        out.push(CellFunction::indicator(space, s, 1.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.random_candidates {
        let v = (0..space.cell_count()).map(|_| rng.random::<f64>()).collect();
        out.push(CellFunction::new(space, v).expect("finite values"));
    }
    out
}

struct Search<'a> {
    op: &'a dyn Operator,
    p: f64,
    weak: bool,
    evaluations: usize,
}

impl Search<'_> {
    /// `(value, λ)`; zero functions score `-∞`.
    fn score(&self, f: &CellFunction<f64>) -> (f64, f64) {
        let nf = lp_norm(f, self.p).expect("p validated");
        if nf == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        let tf = self.op.apply(f);
        if self.weak {
            weak_of_output(tf.values(), self.op.space(), self.p, nf)
        } else {
            (lp_norm(&tf, self.p).expect("p validated") / nf, 0.0)
        }
    }

    /// Best of a batch by `(value, lowest index)`.
    fn best_of(&mut self, batch: Vec<CellFunction<f64>>) -> Option<(CellFunction<f64>, (f64, f64))> {
        self.evaluations += batch.len();
        let scores: Vec<(f64, f64)> = batch.par_iter().map(|f| self.score(f)).collect();
        let mut best: Option<usize> = None;
        for (i, s) in scores.iter().enumerate() {
            if best.is_none_or(|b| s.0 > scores[b].0) {
                best = Some(i);
            }
        }
        let b = best?;
        let s = scores[b];
        batch.into_iter().nth(b).map(|f| (f, s))
    }

    fn refine(&mut self, f: &CellFunction<f64>, count: usize) -> Vec<CellFunction<f64>> {
        self.evaluations += 1;
        let tf = self.op.apply(f);
        let mut vals: Vec<f64> = tf.values().iter().copied().filter(|&v| v > 0.0).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        if vals.is_empty() || count == 0 {
            return Vec::new();
        }
        let k = count.min(vals.len());
        (0..k)
            .map(|i| {
                let v = vals[i * vals.len() / k];
                let cells = tf.values().iter().map(|&t| if t >= v { 1.0 } else { 0.0 }).collect();
                CellFunction::new(self.op.space(), cells).expect("finite values")
            })
            .collect()
    }

    fn ascend(&mut self, mut f: CellFunction<f64>, mut score: (f64, f64), config: &SearchConfig) -> (CellFunction<f64>, (f64, f64)) {
        let factors = [2.0, 0.5, 1.0 + config.epsilon];
        let mut trials = 0;
        let mut values = f.values().to_vec();
        'sweeps: for _ in 0..config.max_sweeps {
            let mut improved = false;
            for c in 0..values.len() {
                if values[c] == 0.0 {
                    continue;
                }
                for &k in &factors {
                    if trials == config.max_trials {
                        break 'sweeps;
                    }
                    trials += 1;
                    let old = values[c];
                    values[c] = old * k;
                    let g = CellFunction::new(f.space(), values.clone()).expect("finite values");
                    let s = self.score(&g);
                    if s.0 > score.0 {
                        score = s;
                        f = g;
                        improved = true;
                        break;
                    }
                    values[c] = old;
                }
            }
            if !improved {
                break;
            }
        }
        self.evaluations += trials;
        (f, score)
    }

    fn run(&mut self, config: &SearchConfig) -> (CellFunction<f64>, (f64, f64)) {
        let start = candidate_functions(self.op, config);
        let (mut f, mut s) = self.best_of(start).expect("candidates are never empty");
        let refined = self.refine(&f, config.refinements);
        if let Some((g, t)) = self.best_of(refined) {
            if t.0 > s.0 {
                f = g;
                s = t;
            }
        }
        self.ascend(f, s, config)
    }
}

/// Lower bound for `‖T‖_{L^p → L^p}`, `1 < p < ∞`.
pub fn strong_norm_witness(op: &dyn Operator, p: f64, config: &SearchConfig) -> Result<NormEstimate> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("strong witnesses need 1 < p < ∞, got {p}")));
    }
    let mut search = Search {
        op,
        p,
        weak: false,
        evaluations: 0,
    };
    let (f, (value, _)) = search.run(config);
    Ok(NormEstimate {
        kind: NormKind::StrongWitness,
        p,
        value,
        lambda: None,
        seed: Some(config.seed),
        iterations: search.evaluations,
        witness: Some(f),
    })
}

/// Lower bound for `‖T‖_{L^p → L^{p,∞}}`, `1 ≤ p < ∞`.
pub fn weak_norm_witness(op: &dyn Operator, p: f64, config: &SearchConfig) -> Result<NormEstimate> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("weak witnesses need 1 ≤ p < ∞, got {p}")));
    }
    let mut search = Search {
        op,
        p,
        weak: true,
        evaluations: 0,
    };
    let (f, (value, lambda)) = search.run(config);
    Ok(NormEstimate {
        kind: NormKind::WeakWitness,
        p,
        value,
        lambda: Some(lambda),
        seed: Some(config.seed),
        iterations: search.evaluations,
        witness: Some(f),
    })
}
