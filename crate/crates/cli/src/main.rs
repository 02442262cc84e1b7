//! `keydyn` — keystroke-dynamics analytics over timestamped key logs
//! and nightly sleep scores.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 parse
//! failure, 4 I/O error. Undefined analysis results (for example a
//! correlation with no defined entries) are reported inside the output
//! artifacts and exit 0.

mod commands;
mod config;
mod error;
mod store;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::FileConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "keydyn", version, about = "Keystroke-dynamics analytics toolkit")]
struct Cli {
    /// Optional JSON config mirroring the flags; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse keystroke log(s) into a normalized event store
    Ingest(commands::IngestArgs),
    /// Frequency ranking, timing stats, deviations, banding and profile
    Stats(commands::StatsArgs),
    /// Day-on-day rank-correlation matrix of bigram speed rankings
    Consistency(commands::ConsistencyArgs),
    /// Correlate daily bigram timing with prior-night sleep scores
    SleepCorr(commands::SleepCorrArgs),
    /// Match a session store against enrolled profiles
    Identify(commands::IdentifyArgs),
    /// Generate a deterministic synthetic dataset with ground truth
    Synth(commands::SynthArgs),
    /// Run the full analysis suite and write every artifact
    Export(commands::ExportArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Ingest(args) => commands::cmd_ingest(args, &file),
        Command::Stats(args) => commands::cmd_stats(args, &file),
        Command::Consistency(args) => commands::cmd_consistency(args, &file),
        Command::SleepCorr(args) => commands::cmd_sleep_corr(args, &file),
        Command::Identify(args) => commands::cmd_identify(args, &file),
        Command::Synth(args) => commands::cmd_synth(args, &file),
        Command::Export(args) => commands::cmd_export(args, &file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
