//! `levem`: derived parameters, trajectories, sweeps, sensitivity and
//! quantum moment reports from a TOML configuration.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use levem_core::Error;

use config::{apply_override, load_table, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("stability error: {0}")]
    Stability(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Stability(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Untrapped { .. } | Error::UnstableTrap { .. } | Error::StepTooLarge { .. } => {
                CliError::Stability(e.to_string())
            }
            Error::InvalidParameter { .. } | Error::Parse { .. } => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "levem",
    version,
    about = "Charged particle in a Paul trap coupled to an RLC circuit"
)]
struct Cli {
    /// TOML configuration, or an output file whose header embeds one
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base random seed (overrides simulation.seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override a configuration key, e.g. --set circuit.resistance_ohm=1e6
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Print derived trap, circuit and damping parameters
    Derive,
    /// Integrate one trajectory and write it as CSV
    Simulate,
    /// Sweep one configuration key, one row per value and replicate
    Sweep,
    /// Velocity, displacement, force and mass detection limits
    Sense,
    /// Gaussian moment steady state and evolution
    Quantum,
    /// Welch spectrum of a simulated or stored trajectory
    Psd,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut table = match &cli.config {
        Some(path) => load_table(path)?,
        None => toml::Table::new(),
    };
    for assignment in &cli.overrides {
        apply_override(&mut table, assignment)?;
    }
    if let Some(seed) = cli.seed {
        apply_override(&mut table, &format!("simulation.seed={seed}"))?;
    }
    RunConfig::from_table(table)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load(cli)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Derive => commands::derive(&cfg, cli.out.as_deref()),
        Command::Simulate => commands::simulate(&cfg, &out),
        Command::Sweep => commands::sweep(&cfg, &out),
        Command::Sense => commands::sense(&cfg, cli.out.as_deref()),
        Command::Quantum => commands::quantum(&cfg, &out),
        Command::Psd => commands::psd(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levem: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
