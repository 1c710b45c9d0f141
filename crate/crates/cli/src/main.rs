//! `longwave`: experiment harness for the long-wave solvers.
//!
//! Subcommands: `simulate`, `sweep`, `growth`, `identity-check`,
//! `strichartz`, `plotdata`. Exit codes are a stable contract:
//! 0 pass, 1 fail, 2 usage or config error, 3 incomplete.

// Negated comparisons like `!(x > 0)` are NaN-rejecting validation guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] longwave_core::Error),
}

impl AppError {
    fn exit_code(&self) -> ExitCode {
        match self {
            AppError::Usage(_) | AppError::Config(_) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

/// What a completed command reports back through the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Incomplete,
}

impl Outcome {
    fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Pass => ExitCode::SUCCESS,
            Outcome::Fail => ExitCode::from(1),
            Outcome::Incomplete => ExitCode::from(3),
        }
    }
}

#[derive(Parser)]
#[command(name = "longwave", version, about = "Pseudo-spectral long-wave model laboratory")]
struct Cli {
    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override for every random draw in the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent runs and ensemble members.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one model and persist its trace and invariant log.
    Simulate,
    /// Co-evolve the two flows across the configured eps list and fit the
    /// convergence rate.
    Sweep,
    /// Long-horizon error growth: exponential fit and validity horizons.
    Growth,
    /// Check the closed-form symbol identities over random samples.
    IdentityCheck {
        /// Number of random (xi, xi1, eps) samples.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Mixed space-time norm ensemble diagnostic for the linear flow.
    Strichartz,
    /// Emit two-column plot data files from a finished run directory.
    Plotdata { run_dir: PathBuf },
}

struct Ctx {
    config_path: Option<PathBuf>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn load_config(&self) -> Result<(config::ExperimentConfig, Vec<u8>), AppError> {
        let path = self
            .config_path
            .as_ref()
            .ok_or_else(|| AppError::Usage("this command requires --config PATH".into()))?;
        config::ExperimentConfig::load(path)
    }

    fn seed_with(&self, cfg_seed: Option<u64>) -> u64 {
        self.seed.or(cfg_seed).unwrap_or(0)
    }

    fn out_dir(&self, cfg: Option<&str>, default: &str) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(default))
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, AppError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(AppError::Usage("--jobs must be at least 1".into()));
        }
        // Ignore the error if a pool already exists (e.g. repeated calls in
        // one process during tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let ctx = Ctx {
        config_path: cli.config,
        seed: cli.seed,
        out: cli.out,
    };
    match cli.command {
        Command::Simulate => commands::simulate::run(&ctx),
        Command::Sweep => commands::sweep::run(&ctx),
        Command::Growth => commands::growth::run(&ctx),
        Command::IdentityCheck { samples } => commands::identity::run(&ctx, samples),
        Command::Strichartz => commands::strichartz::run(&ctx),
        Command::Plotdata { run_dir } => commands::plotdata::run(&ctx, &run_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(err) => {
            eprintln!("longwave: {err}");
            err.exit_code()
        }
    }
}
