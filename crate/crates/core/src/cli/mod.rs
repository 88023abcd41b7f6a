//! Command-line front end: `evaluate`, `simulate`, `baseline`, `leaderboard`
//! and `validate`.
//!
//! Exit codes: 0 success, 1 scoring failure, 2 I/O or parse failure.

mod commands;
pub mod config;
pub mod leaderboard;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_baseline, cmd_evaluate, cmd_leaderboard, cmd_simulate, cmd_validate};
pub use config::{FileConfig, FlagValues, RunConfig};

use crate::baselines::BaselineMode;
use crate::dataset::SplitSelector;
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "corsmal",
    version,
    about = "Container property estimation benchmark: scoring and handover simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// Annotation CSV.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Prediction CSV; repeat the flag to score several submissions.
    #[arg(long)]
    pub predictions: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub split: Option<SplitSelector>,
    /// Output file (or directory when scoring several submissions).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for the random baseline.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for per-configuration work.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Simulation parameter override, `key=value` (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score prediction files and write score reports.
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Fill unaddressed tasks with a baseline for the filling mass and
        /// simulation scores.
        #[arg(long, value_enum)]
        fill_missing: Option<BaselineMode>,
        /// Compute s12 with the container mass score in place of height.
        #[arg(long)]
        s12_literal: bool,
        /// Skip the handover simulation (s9, s10 left out).
        #[arg(long)]
        no_sim: bool,
        /// Aggregate a pre-computed score vector (JSON) instead of scoring files.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Replay handovers and report object safety and delivery accuracy.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Write a per-frame end-effector trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Multiply the ground-truth masses by this factor when no predictions are given.
        #[arg(long)]
        mass_scale: Option<f64>,
    },
    /// Generate a random or training-average prediction file.
    Baseline {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        mode: BaselineMode,
    },
    /// Rank score reports by overall score.
    Leaderboard {
        /// Score report JSON files.
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check annotation, pose track and prediction files.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn flags(common: &CommonArgs) -> FlagValues {
    FlagValues {
        annotations: common.annotations.clone(),
        predictions: common.predictions.clone(),
        split: common.split,
        out: common.out.clone(),
        seed: common.seed,
        jobs: common.jobs,
        config: common.config.clone(),
        params: common.params.clone(),
        ..FlagValues::default()
    }
}

/// Runs a parsed command, writing the human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Evaluate {
            common,
            fill_missing,
            s12_literal,
            no_sim,
            replay,
        } => {
            let cfg = RunConfig::resolve(&FlagValues {
                fill_missing,
                s12_literal,
                no_sim,
                replay,
                ..flags(&common)
            })?;
            cmd_evaluate(&cfg, cfg.replay.as_deref(), stdout)
        }
        Command::Simulate {
            common,
            trace,
            mass_scale,
        } => {
            let cfg = RunConfig::resolve(&FlagValues {
                trace,
                mass_scale,
                ..flags(&common)
            })?;
            cmd_simulate(&cfg, stdout)
        }
        Command::Baseline { common, mode } => {
            let cfg = RunConfig::resolve(&flags(&common))?;
            cmd_baseline(&cfg, mode, stdout)
        }
        Command::Leaderboard { reports, out } => {
            cmd_leaderboard(&reports, out.as_deref(), stdout, stderr)
        }
        Command::Validate { common } => {
            let cfg = RunConfig::resolve(&flags(&common))?;
            cmd_validate(&cfg, stdout)
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
