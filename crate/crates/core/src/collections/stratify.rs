use std::collections::BTreeMap;

use crate::collections::MeasSet;
use crate::error::{Error, Result};
use crate::space::{average, CellFunction};

/// `max{1, log₂ n}`.
pub fn log_plus(n: usize) -> f64 {
    if n <= 2 {
        1.0
    } else {
        (n as f64).log2().max(1.0)
    }
}

/// Bucket of an average against the base threshold `t`: 0 for `avg > t`,
/// `s ≥ 1` for `t 2^{-s} < avg ≤ t 2^{-s+1}`, `None` for a zero average.
pub fn bucket_for(avg: f64, t: f64) -> Option<u32> {
    if avg <= 0.0 {
        return None;
    }
    if avg > t {
        return Some(0);
    }
    let mut s = 1u32;
    let mut lo = t / 2.0;
    while avg <= lo {
        s += 1;
        lo /= 2.0;
    }
    Some(s)
}

/// Sets split by the size of their averages relative to `t = δλ / log_+ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratification {
    pub threshold: f64,
    pub lambda: f64,
    pub delta: f64,
    pub n: usize,
    /// Bucket index to positions in the input list, ascending.
    pub buckets: BTreeMap<u32, Vec<usize>>,
    /// Sets with zero average.
    pub zero: Vec<usize>,
}

impl Stratification {
    pub fn bucket(&self, s: u32) -> &[usize] {
        self.buckets.get(&s).map_or(&[], |v| v.as_slice())
    }
}

pub fn stratify_by_average(
    sets: &[MeasSet],
    f: &CellFunction<f64>,
    lambda: f64,
    delta: f64,
    n: usize,
) -> Result<Stratification> {
    if !(lambda > 0.0) || !(delta > 0.0 && delta < 1.0) || n == 0 {
        return Err(Error::domain(format!(
            "need λ > 0, 0 < δ < 1, N ≥ 1 (got λ={lambda}, δ={delta}, N={n})"
        )));
    }
    let threshold = delta * lambda / log_plus(n);
    let mut buckets: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut zero = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        match bucket_for(average(f, set), threshold) {
            Some(s) => buckets.entry(s).or_default().push(i),
            None => zero.push(i),
        }
    }
    Ok(Stratification {
        threshold,
        lambda,
        delta,
        n,
        buckets,
        zero,
    })
}
