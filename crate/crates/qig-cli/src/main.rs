//! `qig`: command-line front end for the information-geometry library.
//!
//! Every subcommand reads a JSON config (defaults, then file, then
//! repeated --set patches, then --seed), runs its sweep, and writes one
//! document with the version, the fully resolved config, per-case rows,
//! and a summary. The same resolved config always produces the same
//! bytes.
//!
//! Exit codes separate plumbing from science: 0 means the run completed
//! and every checked property held, 2 means the run completed but some
//! verdict failed (the output has the details), 1 means the run itself
//! could not be carried out.

mod commands;
mod config;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{
    resolve, CrboundConfig, CurvatureConfig, DivergenceConfig, FisherConfig, MonotonicityConfig,
};
use output::{render_csv, render_json, Document, Outcome};

#[derive(Parser)]
#[command(
    name = "qig",
    version,
    about = "Monotone information metrics on density-matrix manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Information and generalized variance for a family of functions
    Fisher(CommonArgs),
    /// Estimator variance bounds over seeded statistical models
    Crbound(CommonArgs),
    /// Channel sweeps probing information contraction
    Monotonicity(CommonArgs),
    /// Scalar curvature: thermal-curve scans or seeded point samples
    Curvature(CommonArgs),
    /// Alpha-divergences and the kernel-to-function bridge
    Divergence(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; omitted fields keep their defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overriding the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Inline JSON merged over the config, last one wins; repeatable
    #[arg(long = "set", value_name = "JSON")]
    set: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // an operational failure. Clap's own exit() would report 2,
            // which this tool reserves for verdict failures.
            let ok = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match dispatch(&cli) {
        Ok(failures) => ExitCode::from(exit_for(failures)),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn exit_for(verdict_failures: usize) -> u8 {
    if verdict_failures == 0 {
        0
    } else {
        2
    }
}

fn dispatch(cli: &Cli) -> Result<usize, String> {
    match &cli.command {
        Command::Fisher(args) => execute::<FisherConfig>("fisher", args, commands::fisher::run),
        Command::Crbound(args) => execute::<CrboundConfig>("crbound", args, commands::crbound::run),
        Command::Monotonicity(args) => {
            execute::<MonotonicityConfig>("monotonicity", args, commands::monotonicity::run)
        }
        Command::Curvature(args) => {
            execute::<CurvatureConfig>("curvature", args, commands::curvature::run)
        }
        Command::Divergence(args) => {
            execute::<DivergenceConfig>("divergence", args, commands::divergence::run)
        }
    }
}

fn execute<C>(
    name: &'static str,
    args: &CommonArgs,
    run: impl Fn(&C) -> Result<Outcome, String>,
) -> Result<usize, String>
where
    C: Default + Serialize + DeserializeOwned,
{
    let (cfg, echo) = resolve::<C>(args.config.as_deref(), &args.set, args.seed)?;
    let outcome = run(&cfg)?;
    let failures = outcome.verdict_failures;
    let doc = Document { command: name, config: echo, outcome };
    let text = match args.format {
        Format::Json => render_json(&doc),
        Format::Csv => render_csv(&doc),
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write to stdout: {e}"))?;
        }
    }
    Ok(failures)
}
