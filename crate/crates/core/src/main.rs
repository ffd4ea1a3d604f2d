use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};

use phaseless::cli::{parse_config, run, write_outputs, ScenarioConfig};
use phaseless::Error;

/// Phaseless multi-frequency inverse source scattering.
#[derive(Debug, Parser)]
#[command(name = "phaseless", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write its artifacts and manifest.json.
    Run {
        config: PathBuf,
        /// Overrides the noise seed from the scenario file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; falls back to $PHASELESS_OUT_DIR, then [output] dir.
        #[arg(long, env = "PHASELESS_OUT_DIR")]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a scenario without running it.
    Validate { config: PathBuf },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

enum Failure {
    Config(String),
    Numerical(anyhow::Error),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn load(path: &Path) -> Result<(String, ScenarioConfig), Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match parse_config(&text) {
        Ok(cfg) => Ok((text, cfg)),
        Err(errs) => {
            let lines: Vec<String> = errs.0.iter().map(|e| format!("{}: {e}", path.display())).collect();
            Err(Failure::Config(lines.join("\n")))
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { config } => {
            let (_, cfg) = load(&config)?;
            println!("{}: ok ({}, {} component(s))", config.display(), cfg.mode.name(), cfg.components.len());
            Ok(())
        }
        Command::Run { config, seed, out, threads } => {
            let started = Instant::now();
            let (text, cfg) = load(&config)?;
            let dir = out
                .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
                .ok_or_else(|| Failure::Config("no output directory: pass --out, set PHASELESS_OUT_DIR or add [output] dir".into()))?;
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
            }
            let outcome = run(&cfg, seed).map_err(|e| match e {
                Error::Io(_) => Failure::Other(e.into()),
                Error::Config(c) => Failure::Config(c.to_string()),
                other => Failure::Numerical(other.into()),
            })?;
            write_outputs(&outcome, &cfg, &text, &dir, started).with_context(|| format!("writing {}", dir.display()))?;
            println!("{}: wrote {} artifact(s) to {}", cfg.name, outcome.artifacts.len(), dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
