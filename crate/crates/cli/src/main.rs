//! `cuspavg`: certification, coefficient generation and partial-sum runs
//! with reproducible on-disk reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod certify;
mod config;
mod constants;
mod gen;
mod manifest;
mod output;
mod sums;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "cuspavg", version, about = "Certified weight-function minima, coefficient tables and partial-sum suites")]
pub struct Cli {
    /// key=value file mirroring the subcommand flags; flags given on the
    /// command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for the library kernels (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify minima of the weight functions and compare them with the published values.
    #[command(args_override_self = true)]
    Certify(certify::CertifyArgs),
    /// Generate local data and coefficient tables.
    #[command(args_override_self = true)]
    Gen(gen::GenArgs),
    /// Run partial-sum suites over coefficient data.
    #[command(args_override_self = true)]
    Sums(sums::SumsArgs),
    /// Derived exponent constants from a value of ω₁⁺(1/2).
    #[command(args_override_self = true)]
    Constants(constants::ConstantsArgs),
    /// Re-run the command recorded in a manifest and compare checksums.
    #[command(args_override_self = true)]
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// manifest.json of the run to reproduce.
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Directory for the reproduced outputs.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

/// Outcome of a subcommand, mapped onto the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// An exact inequality failed or a replay did not match.
    Failed,
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    match run(argv) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => match e.downcast_ref::<clap::Error>() {
            Some(ce) => {
                let _ = ce.print();
                ExitCode::from(ce.exit_code() as u8)
            }
            None => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

/// Parses `argv` (merging any `--config` file) and runs the subcommand.
pub fn run(argv: Vec<OsString>) -> Result<Outcome> {
    let (resolved, config) = config::merge(argv.clone())?;
    let cli = Cli::try_parse_from(&resolved)?;
    if let Some(n) = cli.threads {
        anyhow::ensure!(n >= 1, "--threads must be at least 1");
        // a second run in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut run = manifest::Recorder::new(&argv, &resolved, config);
    let outcome = match &cli.command {
        Command::Certify(a) => certify::run(a, &mut run)?,
        Command::Gen(a) => gen::run(a, &mut run)?,
        Command::Sums(a) => sums::run(a, &mut run)?,
        Command::Constants(a) => constants::run(a, &mut run)?,
        Command::Replay(a) => return manifest::replay(&a.manifest, &a.out),
    };
    run.finish().context("writing manifest")?;
    Ok(outcome)
}
