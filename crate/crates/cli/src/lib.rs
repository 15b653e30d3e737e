//! Command-line front end for the sparselab experiments.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use sparselab::collections::build_random_sparse;
use sparselab::experiments::{
    self, directional_experiment, domination_experiment, lemma_delta_experiment, scaling_experiment, sharpness_experiment,
    tail_experiment, verify_suite, Ensemble, ExperimentReport,
};
use sparselab::norms::DEFAULT_SEED;
use sparselab::{build_space, Error};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sparselab", version, about = "Sparse and maximal operators on dyadic spaces")]
pub struct Cli {
    /// JSON file with default values for the flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kernel/oracle equivalence, laminarity and tail checks on seeded families.
    Verify(SpaceArgs),
    /// Overlap tail measurements against the exponential bound.
    Tail(TailArgs),
    /// Witnessed norms of the maximal sparse and maximal operators as N grows.
    Scaling(ScalingArgs),
    /// Independent towers certifying large weak-type witnesses.
    Sharpness(SharpnessArgs),
    /// Exact L² norms of the restricted sparse operator as δ shrinks.
    Lemma(LemmaArgs),
    /// Interval families dominated by martingale sparse operators.
    Dominate(Common),
    /// Maximal functions over sheared rectangles.
    Directional(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[arg(long)]
    pub dim: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    /// Target sparsity of the extra random families.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated N values.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// shear, axis or repeated.
    #[arg(long)]
    pub ensemble: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub depth: Option<u32>,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated powers of 1/2.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    /// Tower depth.
    #[arg(long)]
    pub depth: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

/// Defaults read from `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dim: Option<u32>,
    pub depth: Option<u32>,
    pub p: Option<serde_json::Value>,
    pub n: Option<Vec<usize>>,
    pub gamma: Option<f64>,
    pub delta: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub ensemble: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn p_list(&self) -> anyhow::Result<Option<Vec<f64>>> {
        match &self.p {
            None => Ok(None),
            Some(serde_json::Value::Number(x)) => Ok(Some(vec![x.as_f64().unwrap()])),
            Some(serde_json::Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| anyhow!("p must be numeric")))
                .collect::<anyhow::Result<Vec<_>>>()
                .map(Some),
            Some(_) => bail!("p must be a number or a list of numbers"),
        }
    }

    fn p_single(&self) -> anyhow::Result<Option<f64>> {
        match self.p_list()? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => bail!("this subcommand takes a single p"),
        }
    }
}

/// Marks errors caused by the user's parameters.
#[derive(Debug)]
struct Invalid(anyhow::Error);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(Invalid(e.into()))
}

fn lib<T>(r: sparselab::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e: Error| invalid(e))
}

struct Output {
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

fn output(common: &Common, cfg: &RunConfig) -> Output {
    Output {
        seed: common.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
        out: common.out.clone().or_else(|| cfg.out.clone()),
        format: common.format.or(cfg.format).unwrap_or(Format::Csv),
    }
}

fn execute(cli: Cli) -> anyhow::Result<(ExperimentReport, Output)> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(invalid)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Verify(a) => {
            let o = output(&a.common, &cfg);
            let dim = a.dim.or(cfg.dim).unwrap_or(1);
            let depth = a.depth.or(cfg.depth).unwrap_or(6);
            Ok((lib(verify_suite(dim, depth, o.seed, 20))?, o))
        }
        Command::Tail(a) => {
            let o = output(&a.common, &cfg);
            let dim = a.dim.or(cfg.dim).unwrap_or(1);
            let depth = a.depth.or(cfg.depth).unwrap_or(6);
            let gamma = a.gamma.or(cfg.gamma).unwrap_or(0.5);
            let space = lib(build_space(dim, depth))?;
            if space.cell_count() > 1 << 16 {
                return Err(invalid(anyhow!("tail runs on at most 2^16 cells")));
            }
            let mut fixtures = vec![experiments::fixtures::left_tower(depth.min(16))];
            for k in 0..5u64 {
                let count = 4 + 2 * k as usize;
                let c = lib(build_random_sparse(&space, o.seed.wrapping_add(k), gamma, count))?;
                fixtures.push(experiments::fixtures::Fixture {
                    name: format!("random-{k}"),
                    space,
                    collection: c,
                });
            }
            let lambdas: Vec<f64> = (0..=12).map(|i| i as f64 / 2.0).collect();
            Ok((tail_experiment(&fixtures, &lambdas, o.seed), o))
        }
        Command::Scaling(a) => {
            let o = output(&a.common, &cfg);
            let p = match a.p {
                Some(p) => p,
                None => cfg.p_single().map_err(invalid)?.unwrap_or(2.0),
            };
            let ns = a.n.or(cfg.n.clone()).unwrap_or_else(|| vec![2, 4, 8, 16]);
            let ensemble: Ensemble = lib(a.ensemble.or(cfg.ensemble.clone()).unwrap_or_else(|| "shear".into()).parse())?;
            Ok((lib(scaling_experiment(p, &ns, ensemble, o.seed))?, o))
        }
        Command::Sharpness(a) => {
            let o = output(&a.common, &cfg);
            let ns = a.n.or(cfg.n.clone()).unwrap_or_else(|| (2..=8).map(|m| 1usize << m).collect());
            let depth = a.depth.or(cfg.depth);
            let ps = match a.p {
                Some(p) => p,
                None => cfg.p_list().map_err(invalid)?.unwrap_or_else(|| vec![1.0, 2.0]),
            };
            Ok((lib(sharpness_experiment(&ns, depth, &ps, o.seed))?, o))
        }
        Command::Lemma(a) => {
            let o = output(&a.common, &cfg);
            let p = match a.p {
                Some(p) => p,
                None => cfg.p_single().map_err(invalid)?.unwrap_or(2.0),
            };
            let deltas = a
                .delta
                .or(cfg.delta.clone())
                .unwrap_or_else(|| (1..=7).map(|k| 0.5f64.powi(k)).collect());
            let depth = a.depth.or(cfg.depth).unwrap_or(12);
            Ok((lib(lemma_delta_experiment(p, &deltas, depth, o.seed))?, o))
        }
        Command::Dominate(c) => {
            let o = output(&c, &cfg);
            let fixtures = experiments::fixtures::interval_fixtures(o.seed);
            Ok((lib(domination_experiment(&fixtures, 10, o.seed))?, o))
        }
        Command::Directional(c) => {
            let o = output(&c, &cfg);
            Ok((lib(directional_experiment(o.seed, 10))?, o))
        }
    }
}

fn render(report: &ExperimentReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

/// Parses `argv`, runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let start = Instant::now();
    match execute(cli) {
        Ok((report, o)) => {
            let body = render(&report, o.format);
            let elapsed = start.elapsed().as_secs_f64();
            match &o.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, body) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return EXIT_USAGE;
                    }
                    println!("{} ({elapsed:.2}s) -> {}", report.headline(), path.display());
                }
                None => {
                    print!("{body}");
                    eprintln!("{} ({elapsed:.2}s)", report.headline());
                }
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Invalid>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}
