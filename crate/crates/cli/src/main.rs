//! `wgfret`: bound-state spectra, occupations and Förster potentials of two
//! emitters in a tight-binding waveguide, plus finite-chain cross-checks.
//!
//! Exit codes: 0 ok, 1 comparison failure, 2 usage or configuration error,
//! 3 internal consistency error.

mod commands;
mod config;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use wgfret::oracle::Boundary;
use wgfret::resolvent::InitialState;

use config::{Command, Format, Overrides, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] wgfret::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use wgfret::Error as E;
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(E::InvalidParameter { .. } | E::Domain(_) | E::NoCoupling) => 2,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wgfret",
    version,
    about = "Atom-photon bound states and Förster potentials in a 1D waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Bound-state energies per branch over the R grid.
    Spectrum,
    /// Förster potential, per-branch contributions and detected features.
    Potential,
    /// Residues and occupation numbers of the bound states.
    Occupations,
    /// Critical radii above and below the band.
    Critical,
    /// Finite-chain diagonalization at integer separations.
    Oracle,
    /// Closed form against finite-chain diagonalization; exit 1 on mismatch.
    Compare,
}

#[derive(Debug, Args)]
struct Flags {
    /// Emitter transition frequency, in units of the hopping.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Emitter-waveguide coupling.
    #[arg(long, global = true)]
    u: Option<f64>,
    #[arg(long, global = true)]
    r_min: Option<f64>,
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    r_step: Option<f64>,
    /// Initial state: single, plus or minus.
    #[arg(long, global = true)]
    state: Option<InitialState>,
    /// Number of chain sites for oracle runs.
    #[arg(long, global = true)]
    sites: Option<usize>,
    /// Chain boundary for oracle runs: ring or open.
    #[arg(long, global = true)]
    boundary: Option<Boundary>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value settings file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Spectrum => Command::Spectrum,
            Sub::Potential => Command::Potential,
            Sub::Occupations => Command::Occupations,
            Sub::Critical => Command::Critical,
            Sub::Oracle => Command::Oracle,
            Sub::Compare => Command::Compare,
        }
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let file = cli
        .flags
        .config
        .as_deref()
        .map(config::read_config_file)
        .transpose()?;
    let flags = Overrides {
        omega: cli.flags.omega,
        u: cli.flags.u,
        r_min: cli.flags.r_min,
        r_max: cli.flags.r_max,
        r_step: cli.flags.r_step,
        state: cli.flags.state,
        sites: cli.flags.sites,
        boundary: cli.flags.boundary,
        format: cli.flags.format,
        out: cli.flags.out,
    };
    let config = RunConfig::resolve(cli.command.command(), flags, file)?;
    let outcome = commands::run(&config)?;
    let text = outcome.table.render(config.format);
    match &config.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(!outcome.mismatch)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("wgfret: comparison exceeded tolerance");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("wgfret: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
