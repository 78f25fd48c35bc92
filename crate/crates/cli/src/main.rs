//! `pokm` — pairwise overlapping k-means from the command line.
//!
//! Exit codes: 0 on success, 1 on data errors (unreadable or malformed
//! input), 2 on flag and domain errors.

mod commands;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "pokm",
    version,
    about = "Pairwise overlapping k-means: clustering where each element joins one or two clusters, with a relation graph extracted from the overlaps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a CSV feature matrix and write model, graph, and report files
    Cluster(ClusterArgs),
    /// Generate a synthetic blob-and-bridge dataset with known ground truth
    Generate(GenerateArgs),
    /// Convert between the overlap level and the objective exponent m
    Calibrate(CalibrateArgs),
}

#[derive(clap::Args)]
pub struct ClusterArgs {
    /// Input CSV matrix, one row per element
    #[arg(long)]
    pub input: PathBuf,

    /// Treat the first row as a header
    #[arg(long)]
    pub has_header: bool,

    /// Header column to use as row labels (requires --has-header)
    #[arg(long)]
    pub label_column: Option<String>,

    /// Standardize each column to zero mean and unit variance before fitting
    #[arg(long)]
    pub standardize: bool,

    /// Number of clusters
    #[arg(long, default_value_t = 8)]
    pub k: usize,

    /// Objective exponent, at least 1; alternative to --overlap
    #[arg(long, conflicts_with = "overlap")]
    pub m: Option<f64>,

    /// Desired overlap level in [0, 1); defaults to 1/3
    #[arg(long)]
    pub overlap: Option<f64>,

    /// Relation-graph threshold in [0, 1]
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,

    /// Independent restarts; the best objective wins
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,

    /// Iteration cap per restart
    #[arg(long = "max-iter", default_value_t = 500)]
    pub max_iter: usize,

    /// Initialization method
    #[arg(long, value_enum, default_value_t = InitArg::RandomPoints)]
    pub init: InitArg,

    /// Base seed; restarts derive their own streams from it
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output directory for model.json, graph.json, graph.dot, report.json
    #[arg(long, env = "POKM_OUT_DIR")]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct GenerateArgs {
    /// Scenario config (JSON with keys seed, blobs[], bridges[])
    #[arg(long)]
    pub scenario: PathBuf,

    /// Output directory for dataset.csv and truth.json
    #[arg(long, env = "POKM_OUT_DIR")]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct CalibrateArgs {
    /// Overlap level in [0, 1)
    #[arg(long, conflicts_with = "m")]
    pub overlap: Option<f64>,

    /// Objective exponent, at least 1
    #[arg(long)]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    /// k distinct data rows sampled without replacement
    RandomPoints,
    /// A random row, then repeatedly the row farthest from the chosen means
    GreedySpread,
}

/// CLI failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameter domains; exit code 2.
    Usage(String),
    /// Unreadable or malformed data; exit code 1.
    Data(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors and 0 for --help/--version.
        Err(e) => e.exit(),
    };
    let result = match &cli.command {
        Command::Cluster(args) => commands::run_cluster(args),
        Command::Generate(args) => commands::run_generate(args),
        Command::Calibrate(args) => commands::run_calibrate(args.m, args.overlap),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
