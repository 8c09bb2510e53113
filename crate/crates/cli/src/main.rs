//! Command-line front end for the nanokerr toolkit.
//!
//! Every subcommand reads one declarative TOML config, writes its results
//! as JSON (scalar reports) and CSV (array data) into the output directory,
//! and finishes with a `manifest.json` recording a checksum per artifact.
//! Exit codes: 0 on success, 2 on input problems, 3 when a fit or other
//! numerical procedure fails.

mod commands;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};

use crate::run::Run;

/// Design and measurement-analysis runner for kinetic-inductance nanowire
/// Kerr resonators.
#[derive(Parser)]
#[command(name = "nanokerr", version, about)]
struct Cli {
    /// TOML run configuration. A relative path that does not resolve from
    /// the working directory is retried under $NANOKERR_CONFIG_DIR.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports, tables and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads for sweep evaluation; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Relative tolerance override for adaptive integrals (the radiative
    /// mode-overlap calculation); other subcommands ignore it.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Derive the lumped circuit and Kerr coefficient for one design.
    Design,
    /// Tabulate derived quantities over a grid of design parameters.
    Sweep,
    /// Trace driven steady states of a Kerr cavity across power and detuning.
    Duffing,
    /// Run a pump-probe ladder and re-extract the Kerr coefficient.
    TwoTone,
    /// Fit a critical temperature to resonance-vs-temperature data.
    MbFit,
    /// Assemble the loss budget for a device in its environment.
    Loss,
    /// Calibrate the output-chain gain from noise thermometry.
    Calibrate,
    /// Fit a measurement data set (resonance, tc, tls, sheet or kerr).
    Fit,
    /// Extract the switching time of a two-state telegraph record.
    Telegraph,
    /// Fit an energy-decay ringdown.
    Ringdown,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Design => "design",
            Command::Sweep => "sweep",
            Command::Duffing => "duffing",
            Command::TwoTone => "two-tone",
            Command::MbFit => "mb-fit",
            Command::Loss => "loss",
            Command::Calibrate => "calibrate",
            Command::Fit => "fit",
            Command::Telegraph => "telegraph",
            Command::Ringdown => "ringdown",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => resolve_config(path)?,
        None => bail!("--config is required; every subcommand reads a TOML run configuration"),
    };
    let mut run = Run::start(cli.command.name(), &config, &cli.out, cli.workers, cli.tolerance)?;
    match cli.command {
        Command::Design => commands::design::run(&mut run)?,
        Command::Sweep => commands::sweep::run(&mut run)?,
        Command::Duffing => commands::duffing::run(&mut run)?,
        Command::TwoTone => commands::two_tone::run(&mut run)?,
        Command::MbFit => commands::mb_fit::run(&mut run)?,
        Command::Loss => commands::loss::run(&mut run)?,
        Command::Calibrate => commands::calibrate::run(&mut run)?,
        Command::Fit => commands::fit::run(&mut run)?,
        Command::Telegraph => commands::telegraph::run(&mut run)?,
        Command::Ringdown => commands::ringdown::run(&mut run)?,
    }
    run.finish()
}

/// Finds the config file, falling back to $NANOKERR_CONFIG_DIR for
/// relative paths.
fn resolve_config(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("NANOKERR_CONFIG_DIR") {
            let fallback = Path::new(&dir).join(path);
            if fallback.exists() {
                return Ok(fallback);
            }
            bail!(
                "config {} found neither in the working directory nor under {}",
                path.display(),
                Path::new(&dir).display()
            );
        }
    }
    bail!("config file {} not found", path.display());
}

/// Maps failures onto the documented exit codes: fit and model-regime
/// errors are 3, everything else (bad configs, unreadable files, malformed
/// data) is 2.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<nanokerr::Error>(),
            Some(nanokerr::Error::Fit(_)) | Some(nanokerr::Error::Regime(_))
        )
    });
    if numerical {
        3
    } else {
        2
    }
}
