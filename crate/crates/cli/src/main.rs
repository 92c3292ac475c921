//! `schmidt`: construct, verify and tabulate bounded Schmidt-rank subspaces.
//!
//! Exit codes: 0 success or consistent, 1 I/O or parse failure, 2 usage
//! error, 3 refuted, 4 inconclusive.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "schmidt", version, about = "Subspaces of bipartite states with bounded Schmidt rank")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a basis and write it as JSON.
    Construct(ConstructArgs),
    /// Check a rank claim about a basis file.
    Verify(VerifyArgs),
    /// Print the dimension bounds for one shape or a grid of ranks.
    Bounds(BoundsArgs),
    /// Derived reports.
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructKind {
    /// Every nonzero element has rank ≥ r, maximal dimension.
    MinRank,
    /// Every element has rank ≤ r, maximal dimension.
    Flanders,
    /// Every nonzero element has rank exactly dA (needs dA ≤ dB).
    Fixed,
    /// The 3×3 antisymmetric matrices, rank exactly 2.
    Antisymmetric,
    /// Gaussian complex matrices.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sample,
    Gfp,
    Sigma,
    Structural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum, default_value = "min-rank")]
    pub kind: ConstructKind,
    #[arg(long)]
    pub da: Option<usize>,
    #[arg(long)]
    pub db: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of matrices, for `--kind random`.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "basis.json")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Overrides the rank stored in the basis file.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Prime for `--mode gfp`.
    #[arg(long)]
    pub p: Option<u64>,
    /// Largest number of projective points `--mode gfp` will enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u128,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    /// Relative σ_r below which `--mode sigma` reports a witness.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Report file; the report goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub da: usize,
    #[arg(long)]
    pub db: usize,
    #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
    pub r: Option<usize>,
    /// All ranks 2..=min(dA, dB).
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ReportCommand {
    /// Projector onto a maximal rank-≥⌈(1−p)d⌉ subspace of C^d ⊗ C^d.
    Mixed(MixedArgs),
    /// Exact maximal dimension at r = ⌈k·dA⌉ against the (1−k)²·dA·dB asymptote.
    Random(RandomArgs),
}

#[derive(Args, Debug)]
pub struct MixedArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long)]
    pub da: usize,
    #[arg(long)]
    pub db: usize,
    #[arg(long)]
    pub k: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(args) => commands::construct(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Bounds(args) => commands::bounds(&args),
        Command::Report(ReportCommand::Mixed(args)) => commands::mixed(&args),
        Command::Report(ReportCommand::Random(args)) => commands::random(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Runtime(_) => 1,
            })
        }
    }
}
