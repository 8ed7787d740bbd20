//! Command-line driver for the experiment suite.
//!
//! Loads a flat key-value configuration (with `BBL_*` environment
//! overrides), applies the command-line flags on top, and dispatches to
//! one of the standard commands. Exit code 0 means the command ran and
//! all of its checks passed, 2 means it ran but a check failed (or a
//! computation left its certified regime), and 1 means the configuration
//! or an output file could not be processed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use bergball::config::ExperimentConfig;
use bergball::suite::{run_command, COMMANDS};
use bergball::Error;

#[derive(Parser)]
#[command(
    name = "bergball",
    version,
    about = "Numerical laboratory for weighted Bergman norms on the disk",
    after_help = "Commands: norms, levelsets, dominance, fuglede, gap, chain, \
                  hardy-limit, convex-order, verify-setup, selftest.\n\
                  Every run writes config.resolved (the configuration with all \
                  defaults expanded) next to its output files."
)]
struct Cli {
    /// Command to run; defaults to the config file's `run.command`.
    command: Option<String>,

    /// Configuration file; omitted means built-in defaults plus `BBL_*`
    /// environment overrides.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; overrides the config's `run.out`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads for the level sweeps; 0 means one per core.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    /// Seed for the random convex test family.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,

    /// Multiplies every pass/fail tolerance; 1 is the standard gate.
    #[arg(long, value_name = "X")]
    tolerance_scale: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            let kind = err.kind();
            let _ = err.print();
            return if kind == clap::error::ErrorKind::DisplayHelp
                || kind == clap::error::ErrorKind::DisplayVersion
            {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::from_text("")?,
    };
    if let Some(out) = cli.out {
        config.out_dir = out;
    }
    if let Some(threads) = cli.threads {
        config.threads = threads;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(scale) = cli.tolerance_scale {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!(
                "tolerance scale {scale} must be positive and finite"
            )));
        }
        config.tolerance_scale = scale;
    }

    let command = match cli.command.or_else(|| config.command.clone()) {
        Some(command) => command,
        None => {
            return Err(Error::Config(
                "no command given on the command line or as run.command in the config".into(),
            ))
        }
    };
    if command != "selftest" && !COMMANDS.contains(&command.as_str()) {
        return Err(Error::Config(format!(
            "unknown command `{command}`; expected one of {} or selftest",
            COMMANDS.join(", ")
        )));
    }

    if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool setup failed: {e}")))?;
    }

    let dir = config.out_dir.clone();
    let outcome = run_command(&command, &config, &dir)?;
    for file in &outcome.files {
        println!("wrote {}", file.display());
    }
    println!(
        "[{}] {command}: {}",
        if outcome.pass { "pass" } else { "FAIL" },
        outcome.summary
    );
    Ok(if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
