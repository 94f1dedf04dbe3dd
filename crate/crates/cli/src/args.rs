use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpcd::{SolverConfig, ThresholdPolicy};

use crate::failure::{CliResult, Failure};

#[derive(Parser, Debug)]
#[command(name = "dpcd", version, about = "Discrete principal coordinate descent for binary optimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Densest-k-subgraph on an edge list or MatrixMarket file.
    Subgraph(SubgraphArgs),
    /// Train supervised hash codes and optionally score retrieval.
    Hash(HashArgs),
    /// Minimize x^T A x + c^T x + d over {-1, +1}^n.
    Quad(QuadArgs),
    /// Compare DPCD against exhaustive search and the step bounds.
    Oracle(OracleArgs),
    /// Run the method comparison grid and a hashing scaling series.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThresholdMode {
    Lipschitz,
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha2: f64,
    /// Margin added to the Lipschitz constant (lipschitz mode only).
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub threshold_mode: Option<ThresholdMode>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Run a neighborhood search every T iterations; 0 disables it.
    #[arg(long)]
    pub nbr_cadence: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub nbr_radius: usize,
    /// Neighbors evaluated per search; 0 picks automatically.
    #[arg(long, default_value_t = 0)]
    pub nbr_budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format (json by default, csv for bench).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Include wall-clock times in JSON output.
    #[arg(long)]
    pub timings: bool,
}

/// Per-command defaults for flags that do not have a global one.
pub struct Defaults {
    pub threshold_mode: ThresholdMode,
    pub max_iters: usize,
    pub nbr_cadence: usize,
}

impl SolverArgs {
    pub fn config(&self, defaults: &Defaults) -> CliResult<SolverConfig> {
        let mode = self.threshold_mode.unwrap_or(defaults.threshold_mode);
        if self.epsilon.is_some() && mode != ThresholdMode::Lipschitz {
            return Err(Failure::usage("--epsilon only applies with --threshold-mode lipschitz"));
        }
        let cfg = SolverConfig {
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            max_iterations: self.max_iters.unwrap_or(defaults.max_iters),
            neighborhood_cadence: self.nbr_cadence.unwrap_or(defaults.nbr_cadence),
            neighborhood_radius: self.nbr_radius,
            neighborhood_budget: self.nbr_budget,
            threshold_policy: match mode {
                ThresholdMode::Lipschitz => ThresholdPolicy::Lipschitz { epsilon: self.epsilon },
                ThresholdMode::Average => ThresholdPolicy::GradientAverage,
            },
            center_constrained_gradient: true,
            seed: self.seed,
        };
        cfg.validate()?;
        if cfg.max_iterations == 0 {
            return Err(Failure::usage("--max-iters must be >= 1"));
        }
        Ok(cfg)
    }
}

pub const SOLVE_DEFAULTS: Defaults = Defaults {
    threshold_mode: ThresholdMode::Average,
    max_iters: 100,
    nbr_cadence: 10,
};

#[derive(Args, Debug)]
pub struct SubgraphArgs {
    /// Edge list (`u v [w]`, 0-based) or MatrixMarket coordinate file.
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Also run greedy peeling and random search.
    #[arg(long)]
    pub baselines: bool,
    /// Samples for the random-search baseline.
    #[arg(long, default_value_t = 10_000)]
    pub random_samples: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct HashArgs {
    /// Training features, CSV or DPCDMAT1 (one row per sample).
    pub features: PathBuf,
    /// Training labels, one-hot or multi-hot rows.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub code_length: usize,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 5)]
    pub outer_iters: usize,
    /// Held-out query features; the training set is the database.
    #[arg(long)]
    pub eval: Option<PathBuf>,
    /// Labels of the held-out queries (required with --eval).
    #[arg(long)]
    pub eval_labels: Option<PathBuf>,
    /// Cutoff for precision@K.
    #[arg(long, default_value_t = 500)]
    pub top_k: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct QuadArgs {
    /// Matrix A (CSV or DPCDMAT1). Omit to use --random.
    pub matrix: Option<PathBuf>,
    /// Linear term c as a single row or column.
    #[arg(long)]
    pub linear: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub offset: f64,
    /// Generate a random instance of this size instead of reading A.
    #[arg(long)]
    pub random: Option<usize>,
    /// Require exactly k entries equal to +1.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleProblem {
    /// Shifted separable quadratic 1/2 sum (x_i + beta_i)^2.
    Separable,
    /// Random symmetric quadratic with entries in [-1, 1].
    Quadratic,
    /// Random graph dense-subgraph instance (needs --k).
    Subgraph,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Matrix A of a quadratic instance; overrides --problem.
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OracleProblem::Quadratic)]
    pub problem: OracleProblem,
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Refuse feasible sets larger than 2^limit.
    #[arg(long, default_value_t = dpcd::baselines::DEFAULT_ORACLE_LIMIT)]
    pub limit: u32,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated subset of dpcd,dpcd0,sgm,greedy,random.
    #[arg(long, default_value = "dpcd,dpcd0,sgm,greedy,random")]
    pub methods: String,
    /// Seeds per instance family.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    /// Planted-partition size.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 25)]
    pub k: usize,
    /// Sample counts for the hashing scaling series.
    #[arg(long, value_delimiter = ',', default_values_t = [1_000, 10_000, 100_000])]
    pub scaling: Vec<usize>,
    #[arg(long)]
    pub no_scaling: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}
