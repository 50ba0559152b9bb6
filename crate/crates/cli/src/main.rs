mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser)]
#[command(
    name = "apauc",
    version,
    about = "AUC and average precision for binary scores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// AUC, AP, prevalence, momentum estimate and AP standard errors for one score column.
    Metrics(MetricsArgs),
    /// Rank several score columns by AP.
    Rank(RankArgs),
    /// Export hit, ROC and precision-recall points.
    Curves(CurvesArgs),
    /// Evaluate the two-segment hit-curve model.
    Quasi(QuasiArgs),
    /// Simulate binormal scores.
    Simulate(SimulateArgs),
    /// Recompute AP and AUC after replicating every control m times.
    Inflate(InflateArgs),
    /// Standard error of a difference between two correlated estimates.
    DiffSe(DiffSeArgs),
}

#[derive(Args, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "label")]
    pub label_col: String,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum SeArg {
    Asymptotic,
    Pboot,
    Npboot,
}

#[derive(Args, Clone)]
pub struct SeArgs {
    /// Standard error methods to compute.
    #[arg(long = "se", value_enum, value_delimiter = ',')]
    pub methods: Vec<SeArg>,
    /// Bootstrap replicates.
    #[arg(long = "bootstrap", default_value_t = apauc::bootstrap::DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Score column; defaults to the only non-label column.
    #[arg(long)]
    pub score_col: Option<String>,
    #[command(flatten)]
    pub se: SeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Score columns; defaults to every non-label column.
    #[arg(long, value_delimiter = ',')]
    pub score_cols: Vec<String>,
    #[command(flatten)]
    pub se: SeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct CurvesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub score_col: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct QuasiArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub pi: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub pi: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    /// Number of independent datasets; 1 reports a single scenario run.
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct InflateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',')]
    pub score_cols: Vec<String>,
    /// Control replication factors.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 10, 100])]
    pub inflate: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct DiffSeArgs {
    #[arg(long)]
    pub se1: f64,
    #[arg(long)]
    pub se2: f64,
    /// Correlations between the two estimates.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub rho: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Metrics(a) => commands::metrics(&a),
        Command::Rank(a) => commands::rank(&a),
        Command::Curves(a) => commands::curves(&a),
        Command::Quasi(a) => commands::quasi(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Inflate(a) => commands::inflate(&a),
        Command::DiffSe(a) => commands::diff_se(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
