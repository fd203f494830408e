//! `rxnpack` command-line interface.
//!
//! Exit codes: 0 success, 1 input error, 2 computation or tolerance failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

/// Default seed for every randomized command.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "rxnpack", version, about = "Simulate, unpack and analyze biochemical reaction networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an SSA ensemble and write summary statistics.
    Simulate(SimulateArgs),
    /// Integrate the deterministic rate equations.
    Ode(OdeArgs),
    /// Apply unpack directives and emit the elementary network.
    Unpack(UnpackArgs),
    /// Run an ensemble and estimate a rate, binding fraction or period.
    Analyze(AnalyzeArgs),
    /// Run a built-in comparison with embedded tolerances.
    Reproduce(ReproduceArgs),
    /// Parse and check a model without simulating it.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Model file or built-in name (mm_packed, mm_unpacked, hill_packed, ...).
    pub model: String,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[arg(long)]
    pub t_end: f64,
    /// Recording interval; defaults to t_end/200.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Run replicates on one thread.
    #[arg(long)]
    pub serial: bool,
    /// Output directory; defaults to `$RXNPACK_OUT_DIR/<command>` or `rxnpack-out/<command>`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Also write one CSV per replicate.
    #[arg(long)]
    pub trajectories: bool,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    pub model: String,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UnpackArgs {
    pub model: String,
    /// Extra Michaelis-Menten expansion, `REACTION:ETOT:RHO`.
    #[arg(long = "mm", value_name = "REACTION:ETOT:RHO")]
    pub mm: Vec<String>,
    /// Extra Hill expansion, `REACTION:K1:S1:S2`.
    #[arg(long = "hill", value_name = "REACTION:K1:S1:S2")]
    pub hill: Vec<String>,
    /// Destination `.rxn`; the expansion report goes next to it. Prints to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(subcommand)]
    pub kind: AnalyzeKind,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeKind {
    /// Initial product formation rate.
    Rate {
        #[arg(long)]
        product: String,
        /// Initial substrate amount; the window ends after `cap·s0` product.
        #[arg(long)]
        s0: f64,
        #[arg(long, default_value_t = 0.1)]
        cap: f64,
    },
    /// Time- and replicate-averaged bound fraction.
    Binding {
        #[arg(long)]
        bound: String,
        #[arg(long)]
        total: u64,
        #[arg(long, default_value_t = 0.2)]
        burn_in: f64,
    },
    /// Period of a weighted species sum such as `CP,CP2:2,C:2`, per replicate.
    Period {
        #[arg(long)]
        observable: String,
        #[arg(long)]
        smoothing: f64,
        #[arg(long, default_value_t = 0.0)]
        burn_in: f64,
    },
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// table3, table5, fig3, fig4 or fig9-noise.
    pub target: String,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub serial: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub model: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Compute(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
