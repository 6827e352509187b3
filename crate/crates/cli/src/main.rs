//! Command-line front end: solve, convergence and frequency sweeps, near-wall
//! profiles.
//!
//! Exit codes: 0 on success, 1 for configuration or validation errors, 2 for
//! solver or I/O failures.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Parser, Subcommand};
use viscoacoustic::export::CsvMeta;

use commands::{Ctx, Status};
use config::{ConfigError, RunConfig};

const ENV_OUT: &str = "VISCOACOUSTIC_OUT_DIR";
const ENV_JOBS: &str = "VISCOACOUSTIC_JOBS";

#[derive(Parser)]
#[command(name = "viscoacoustic", version, about = "Approximate models for viscous acoustics in thin-layer geometries")]
struct Cli {
    /// TOML run configuration. Defaults describe the reference experiment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides VISCOACOUSTIC_OUT_DIR and `run.out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (overrides VISCOACOUSTIC_JOBS and `run.jobs`).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the viscous model and the configured orders, write fields on a grid.
    Solve,
    /// Sweep η at fixed ω, write errors and convergence slopes.
    Converge,
    /// Sweep ω at fixed η, write errors and the strip eigenfrequencies.
    SweepOmega,
    /// Side view of the tangential velocity with the boundary-layer corrector.
    Nearfield {
        /// Accept a slice that passes through the source.
        #[arg(long)]
        force: bool,
    },
}

fn env_value<T: std::str::FromStr>(name: &str) -> anyhow::Result<Option<T>> {
    match std::env::var(name) {
        Ok(v) if !v.is_empty() => {
            v.parse().map(Some).map_err(|_| ConfigError(format!("environment variable {name}: cannot parse `{v}`")).into())
        }
        _ => Ok(None),
    }
}

fn load(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("reading {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = cli.out.clone().or(env_value(ENV_OUT)?) {
        cfg.run.out = out;
    }
    if let Some(jobs) = cli.jobs.or(env_value(ENV_JOBS)?) {
        cfg.run.jobs = Some(jobs);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let cfg = load(&cli)?;
    if let Some(jobs) = cfg.run.jobs {
        if jobs == 0 {
            return Err(ConfigError("invalid field `run.jobs`: need at least one thread".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("starting the worker pool")?;
    }
    let mut meta = CsvMeta::new(cfg.hash());
    if cfg.run.timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        meta = meta.with_timestamp(format!("unix-time={secs}"));
    }
    let ctx = Ctx { out: cfg.run.out.clone(), meta };
    match cli.command {
        Command::Solve => commands::solve(&cfg, &ctx),
        Command::Converge => commands::converge(&cfg, &ctx),
        Command::SweepOmega => commands::sweep_omega(&cfg, &ctx),
        Command::Nearfield { force } => commands::nearfield(&cfg, &ctx, force),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<viscoacoustic::Error>() {
        Some(e) if e.is_near_singular() => 2,
        Some(viscoacoustic::Error::Io(_)) => 2,
        Some(_) => 1,
        None => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Status::Complete) => ExitCode::SUCCESS,
        Ok(Status::SolverFailure) => {
            eprintln!("error: at least one solve failed, see summary.csv");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
