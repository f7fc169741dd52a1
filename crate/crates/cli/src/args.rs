use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const THREADS_ENV: &str = "FOOTRULE_DIR_THREADS";

/// Directional Spearman footrule coefficients: exact values, rank estimates
/// and seeded Monte Carlo reproduction.
///
/// Every subcommand flag can also come from `--config FILE`, a flat
/// `key = value` file whose keys are the long flag names without dashes
/// (`theta = 0.8`, `alpha = all`, `strict-paper = true`). Flags on the command
/// line win over the file; the file wins over FOOTRULE_DIR_THREADS.
#[derive(Debug, Parser)]
#[command(name = "footrule-dir", version, args_override_self = true)]
pub struct Cli {
    /// Flat key = value file supplying default flag values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for simulations and direction tables (0 = all cores).
    /// Changes speed only, never results
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0, value_name = "N")]
    pub threads: usize,

    /// Run everything on the calling thread
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact coefficient for one direction or all of them, as CSV
    PhiExact(PhiExactArgs),
    /// Rank estimate from a dataset CSV
    PhiEstimate(PhiEstimateArgs),
    /// Draw a seeded sample and write it as CSV
    Sample(SampleArgs),
    /// Monte Carlo study of the estimator for one model
    Simulate(SimulateArgs),
    /// Rerun a published simulation grid (T1, T3, T4, T6)
    Reproduce(ReproduceArgs),
    /// Exact coefficients along a parameter grid, per |J| class
    Sweep(SweepArgs),
    /// Check a model's CDF on a grid: groundedness, margins, range, C-volumes
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Copula family: independence, comonotone, countermonotone, fgm, clayton, ca
    #[arg(long)]
    pub family: String,

    /// Family parameter: θ for clayton (> 0) and ca ([0, 1]), λ for fgm ([-1, 1])
    #[arg(long, visible_alias = "lambda", allow_negative_numbers = true)]
    pub theta: Option<f64>,

    /// Dimension (≥ 2)
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Args)]
pub struct PhiExactArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Direction as a sign string such as +--+, or `all`
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,

    /// auto (closed form, else decomposition, else quadrature), closed, decomposition, quadrature
    #[arg(long, default_value = "auto")]
    pub method: String,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Maximum number of adaptive quadrature panels
    #[arg(long, default_value_t = 4096)]
    pub max_panels: usize,
}

#[derive(Debug, Args)]
pub struct PhiEstimateArgs {
    /// Dataset CSV: header row, then one observation per line
    #[arg(long)]
    pub input: PathBuf,

    /// Direction as a sign string such as +--+, or `all`
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,

    /// Within-column ties: first_occurrence (rank by row order, with a warning) or strict (error)
    #[arg(long, default_value = "first_occurrence")]
    pub ties: String,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Sample size
    #[arg(long)]
    pub n: usize,

    /// Master seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Stream index (replication id) within the master seed
    #[arg(long, default_value_t = 0)]
    pub stream: u64,

    /// Output CSV (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Comma-separated sign strings, or `all`
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,

    /// Comma-separated sample sizes, e.g. 20,50,100,500
    #[arg(long)]
    pub n: String,

    /// Replications per sample size
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,

    /// Master seed; replication r uses stream r
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Report CSV (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Box-plot summary CSV (quartiles and whiskers per n)
    #[arg(long)]
    pub boxplot: Option<PathBuf>,

    /// SVG chart of quartiles against n (single direction only)
    #[arg(long)]
    pub chart: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// T1, T3, T4, T6 or all
    #[arg(long)]
    pub table: String,

    /// Master seed
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Replications per cell
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,

    /// Directory for the table CSVs (t1.csv, ...)
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

    /// Exit 5 when any cell disagrees with the published value, not only with our exact value
    #[arg(long)]
    pub strict_paper: bool,

    /// Do not print the five-decimal summary table
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Copula family with a parameter: fgm, clayton, ca
    #[arg(long)]
    pub family: String,

    /// Dimension (≥ 2)
    #[arg(long)]
    pub d: usize,

    /// Parameter grid: comma list (0.1,0.5,1) or start:stop:count (0.1:10:50)
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,

    /// Comma-separated |J| classes (default: every class 0..=d)
    #[arg(long)]
    pub classes: Option<String>,

    /// Absolute quadrature tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Output CSV (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// SVG chart, one polyline per class
    #[arg(long)]
    pub chart: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Grid points per axis minus one; the grid is {0, 1/r, ..., 1}^d
    #[arg(long, default_value_t = 10)]
    pub resolution: usize,

    /// Largest tolerated violation
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}
