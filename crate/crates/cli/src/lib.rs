//! The `freereg` command line: one subcommand per experiment, each
//! deterministic given its flags and seed, with machine-readable output.

pub mod commands;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Version tag written into every JSON document and sidecar.
pub const SCHEMA_VERSION: u32 = 1;

/// Exit status for a failed identity check.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for bad usage or input.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for resource or convergence failures.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "freereg",
    version,
    about = "Noncommutative calculus and random-matrix spectral regularity experiments",
    after_help = "Exit status: 0 success, 1 identity check failed, 2 usage or input error, \
                  3 resource or convergence error.\nFREEREG_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Difference quotient ∂_j P, number operators, the phase action φ_t and
    /// the homogeneous parts of P (exact, JSON)
    Derive(DeriveArgs),
    /// Audit the algebraic identities: the Hochschild-cycle relation
    /// Σ ∂_iP·(X_i⊗1 − 1⊗X_i) = P⊗1 − 1⊗P symbolically and on matrices, and
    /// (∂_iP)^σ # P* = 0 for every variable absent from P
    Check(CheckArgs),
    /// Pool the eigenvalues of P(Y) over independent GUE draws; writes the
    /// measure CSV, a histogram CSV and a metadata JSON
    Simulate(SimulateArgs),
    /// Exact trace moments τ(P^j) next to Monte Carlo averages of tr_N(P(Y)^j)
    Moments(MomentsArgs),
    /// Log-energy ∬ log|s − t| dμ dμ of the spectral measure and the
    /// single-variable free entropy χ = log-energy + C
    Entropy(EntropyArgs),
    /// Fit the local decay exponent α in μ[t − ε, t + ε] ≈ C ε^α
    Decay(DecayArgs),
    /// Largest mass carried by a window of width ε (atom detection)
    Atoms(AtomsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PolyArgs {
    /// Polynomial, e.g. "x1*x2 + x2*x1" (see the grammar in the README)
    pub poly: String,
    /// Number of variables [default: largest index used]
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    /// Matrix dimension N
    #[arg(long = "N", visible_alias = "dim", default_value_t = 1000)]
    pub dim: usize,
    /// Number of independent draws pooled together
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Master seed; trial t uses its own stream derived from (seed, t)
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Matrix ensemble: gue, or the atomic control bernoulli
    #[arg(long, visible_alias = "control", default_value = "gue")]
    pub ensemble: String,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the result to this file (atomically) instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Differentiate with respect to x<j>
    #[arg(long)]
    pub j: usize,
    /// Phase parameters t for the φ_t table
    #[arg(long = "t", value_delimiter = ',', default_values_t = [0.0, 0.125, 0.25, 0.5])]
    pub ts: Vec<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Matrix size for the exact rational check (at most 4)
    #[arg(long, default_value_t = 3)]
    pub exact_dim: usize,
    /// Matrix size for the floating-point check
    #[arg(long, default_value_t = 50)]
    pub float_dim: usize,
    /// Relative tolerance of the floating-point check
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Print the table as JSON
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Histogram bins
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Histogram range as LO,HI [default: support of the sample]
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub range: Option<Vec<f64>>,
    /// Reference law to compare against by KS distance (semicircle, free-poisson)
    #[arg(long)]
    pub reference: Option<String>,
    /// Output prefix: writes PREFIX.measure.csv, PREFIX.histogram.csv, PREFIX.meta.json
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Highest moment order
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub mc: McArgs,
    /// Trace functional for the exact side
    #[arg(long, default_value = "semicircular")]
    pub trace: String,
    /// JSON table of word values [{"word": [1, 1], "value": "1"}, ...] used instead of --trace
    #[arg(long)]
    pub trace_table: Option<PathBuf>,
    /// Abort when an exact power would need more term products than this
    #[arg(long, default_value_t = freereg::freetrace::DEFAULT_TERM_BUDGET)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Log-energy below which the measure is flagged as near-atomic
    #[arg(long, default_value_t = freereg::spectral::DEFAULT_ATOM_WARNING_LEVEL, allow_hyphen_values = true)]
    pub warning_level: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Center of the shrinking windows
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.4)]
    pub eps_start: f64,
    #[arg(long, default_value_t = 0.7)]
    pub eps_ratio: f64,
    #[arg(long, default_value_t = 8)]
    pub eps_count: usize,
    /// Use windows [t, t + ε] instead of [t − ε, t + ε]
    #[arg(long)]
    pub one_sided: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AtomsArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub mc: McArgs,
    /// Window width ε
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    /// Threshold θ(ε) = coefficient · ε^exponent
    #[arg(long, default_value_t = 1.0)]
    pub theta_coefficient: f64,
    #[arg(long, default_value_t = 0.4)]
    pub theta_exponent: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// What a successful run prints and the status it exits with.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<freereg::Error> for CliError {
    fn from(e: freereg::Error) -> Self {
        use freereg::Error as E;
        let code = match &e {
            E::BudgetExceeded { .. } | E::NoConvergence(_) | E::SparseMass { .. } | E::Io(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Derive(a) => commands::derive(&a),
        Command::Check(a) => commands::check(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Moments(a) => commands::moments(&a),
        Command::Entropy(a) => commands::entropy(&a),
        Command::Decay(a) => commands::decay(&a),
        Command::Atoms(a) => commands::atoms(&a),
    }
}

/// Sizes the global worker pool from `FREEREG_THREADS` when it is set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FREEREG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| CliError::usage(format!("FREEREG_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError { code: EXIT_RESOURCE, message: e.to_string() })
}
