#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod dataset;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Ewens-Pitman sampling model: estimator tables, rate functions, tail
/// approximations, fitting, simulation and self-checks.
#[derive(Debug, Parser)]
#[command(name = "eptool", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discovery and singleton-proportion estimator tables.
    Tables(commands::tables::TablesArgs),
    /// Large-deviation rate function of the proportion of blocks of size l.
    Rate(commands::rate::RateArgs),
    /// Large-deviation approximations of the singleton-proportion tail.
    Tail(commands::tail::TailArgs),
    /// Fit (alpha, theta) to a dataset.
    Fit(commands::fit::FitArgs),
    /// Simulate partitions or continuations of a dataset.
    Simulate(commands::simulate::SimulateArgs),
    /// Run the numerical self-checks; exits nonzero on failure.
    Verify(commands::verify::VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FitChoice {
    /// Match E[K_n] to the observed number of blocks for the given alpha.
    Mean,
    /// Maximize the partition likelihood over (alpha, theta).
    Mle,
}

/// Output options shared by every command.
#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Model parameters, given directly or fitted to the dataset.
#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "fit")]
    pub theta: Option<f64>,
    /// Fit theta (mean) or both parameters (mle) to the dataset.
    #[arg(long, value_enum)]
    pub fit: Option<FitChoice>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match &cli.command {
        Command::Tables(a) => commands::tables::run(a),
        Command::Rate(a) => commands::rate::run(a),
        Command::Tail(a) => commands::tail::run(a),
        Command::Fit(a) => commands::fit::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Verify(a) => commands::verify::run(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
