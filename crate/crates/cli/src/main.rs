//! `unwind run | report | validate <config.toml>`

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unwind_core::sweep::{point_report, run_sweep, SweepConfig, WORKERS_ENV};
use unwind_core::Error;

#[derive(Parser)]
#[command(name = "unwind", version, about = "Markovianity sweeps over periodically driven and mixed dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every grid point and write the CSV named in the config.
    Run {
        config: PathBuf,
        /// Worker threads; overrides the config value.
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Print a JSON diagnostic for one grid point.
    Report {
        config: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Parse and check a config without evaluating anything.
    Validate { config: PathBuf },
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::ConfigInvalid(_) | Error::IndexOutOfRange { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, workers } => {
            let (mut cfg, text) = match SweepConfig::load(&config) {
                Ok(v) => v,
                Err(e) => return exit_for(&e),
            };
            if let Some(n) = workers.filter(|&n| n > 0) {
                cfg.workers = Some(n);
            }
            match run_sweep(&cfg, &text) {
                Ok(summary) => {
                    eprintln!(
                        "wrote {} rows to {} ({} failed, {} warnings)",
                        summary.rows,
                        summary.path.display(),
                        summary.failures,
                        summary.warnings
                    );
                    ExitCode::from(summary.exit_code() as u8)
                }
                Err(e) => exit_for(&e),
            }
        }
        Command::Report { config, i, j } => {
            let report = SweepConfig::load(&config).and_then(|(cfg, _)| point_report(&cfg, i, j));
            match report {
                Ok(r) => {
                    let text = serde_json::to_string_pretty(&r).expect("report serializes");
                    // A closed pipe (e.g. `| head`) is not an error.
                    let _ = writeln!(std::io::stdout().lock(), "{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => exit_for(&e),
            }
        }
        Command::Validate { config } => match SweepConfig::load(&config) {
            Ok((cfg, _)) => {
                let (n1, n2) = cfg.shape();
                println!("ok: {n1} x {n2} grid, {} workers", cfg.workers());
                ExitCode::SUCCESS
            }
            Err(e) => exit_for(&e),
        },
    }
}
