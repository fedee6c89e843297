//! Scenario runner for the time-energy uncertainty QKD simulator.
//!
//! `teqkd run <config>` executes one end-to-end simulation and writes
//! events.log, transcript.log, summary.txt, summary.csv and histogram.csv
//! into the output directory (`key_A.hex`/`key_B.hex` too in omniscient
//! mode). The exit status encodes the verdict: 0 clean, 2 compromised,
//! 3 inconclusive, 1 configuration or runtime error.
//!
//! `teqkd sweep <config>` runs the parameter sweep configured in the file
//! and writes one plot-ready CSV row per swept value.
//!
//! Configuration files are flat `key = value` text; frequencies are angular
//! frequencies in s⁻¹ (scientific notation welcome), times in seconds.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use teqkd::runner;
use teqkd::scenario::ScenarioConfig;

#[derive(Parser)]
#[command(
    name = "teqkd",
    version,
    about = "Time-energy uncertainty QKD simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Include the eavesdropper's internals and both parties' keys in the
    /// output.
    #[arg(long, global = true)]
    omniscient: bool,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one end-to-end simulation of a scenario.
    Run { config: PathBuf },
    /// Execute the parameter sweep configured in the scenario file.
    Sweep { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &PathBuf, quiet: bool) -> anyhow::Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read configuration {}", path.display()))?;
    let (config, warnings) =
        ScenarioConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if !quiet {
        for warning in &warnings {
            eprintln!("warning: {warning}");
        }
    }
    Ok(config)
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Run { config } => {
            let scenario = load(config, cli.quiet)?;
            let result = runner::run_trial(&scenario, 0);
            runner::write_artifacts(&cli.out, &scenario, &result, cli.omniscient)
                .with_context(|| format!("writing artifacts to {}", cli.out.display()))?;
            if !cli.quiet {
                print!("{}", result.summary.to_text_block());
                println!("artifacts = {}", cli.out.display());
            }
            Ok(result.exit_code() as u8)
        }
        Command::Sweep { config } => {
            let scenario = load(config, cli.quiet)?;
            let table = runner::run_sweep(&scenario)?;
            fs::create_dir_all(&cli.out)
                .with_context(|| format!("creating {}", cli.out.display()))?;
            let csv_path = cli.out.join("sweep.csv");
            fs::write(&csv_path, table.to_csv())
                .with_context(|| format!("writing {}", csv_path.display()))?;
            if !cli.quiet {
                print!("{}", table.to_csv());
                println!("# written to {}", csv_path.display());
            }
            Ok(0)
        }
    }
}
