//! `vvmf`: batch runs over parameter triples with CSV/JSON reports.
//!
//! Exit codes: 0 on success, 1 when a verification or cross-check finds a
//! mismatch, 2 on invalid input or an I/O failure.

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use vvmf_cli::commands::{self, EnumerateMode, Status};
use vvmf_cli::config::{RunArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "vvmf",
    version,
    about = "Exact Fourier coefficients of minimal-weight 2-dimensional vector-valued modular forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient tables for both components of F0, cross-checked between two recursions.
    Compute {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare exact denominator valuations with the predicted growth.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Scale this coefficient before tabulating (negative control).
        #[arg(long, hide = true)]
        corrupt_index: Option<usize>,
    },
    /// Parameters and constraint checks of each triple.
    Classify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the admissible (M, N) pairs or the valid triples.
    Enumerate {
        #[arg(value_enum)]
        mode: EnumerateMode,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Empirical denominator growth of F0 up to the horizon.
    Report {
        #[command(flatten)]
        run: RunArgs,
    },
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Compute { run } => commands::compute(&RunConfig::from_args(run)?),
        Command::Verify { run, corrupt_index } => {
            commands::verify(&RunConfig::from_args(run)?, corrupt_index)
        }
        Command::Classify { run } => commands::classify(&RunConfig::from_args(run)?),
        Command::Enumerate { mode, run } => commands::enumerate(&RunConfig::from_args(run)?, mode),
        Command::Report { run } => commands::report(&RunConfig::from_args(run)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
