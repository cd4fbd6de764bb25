//! Command-line scenario runner. CSV artifacts go to the directory named by
//! `LAMBDAWG_OUTDIR` (default: the working directory); one JSON summary line
//! per series is printed to stdout. Exit codes: 0 ok, 1 bad input, 2
//! numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lambdawg_core::scenario::{self, Scenario, ScenarioError};

#[derive(Parser)]
#[command(
    name = "lambdawg",
    version,
    about = "Retarded spontaneous emission of three-level emitters in a mirror-terminated waveguide"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a TOML config file.
    Simulate { config: PathBuf },
    /// Emit the CSV series of a built-in figure preset.
    Figure {
        #[arg(value_parser = scenario::FIGURES)]
        name: String,
    },
    /// Solve the bound-state problem for a config and report all roots.
    BoundState { config: PathBuf },
    /// Cross-validate the delay integrator against the mode oracle.
    Compare { config: PathBuf },
}

fn outdir() -> PathBuf {
    std::env::var_os("LAMBDAWG_OUTDIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    Scenario::from_toml(&text)
}

fn run(command: Command) -> Result<(), ScenarioError> {
    let outdir = outdir();
    match command {
        Command::Simulate { config } => {
            let outputs = scenario::run_scenario(&load(&config)?)?;
            scenario::write_series(&outdir, &outputs)?;
            for output in &outputs {
                println!("{}", output.summary.to_json_line());
            }
        }
        Command::Figure { name } => {
            let scenario = Scenario {
                mode: Some("figure".to_string()),
                figure: Some(name),
                ..Scenario::default()
            };
            let outputs = scenario::run_scenario(&scenario)?;
            scenario::write_series(&outdir, &outputs)?;
            for output in &outputs {
                println!("{}", output.summary.to_json_line());
            }
        }
        Command::BoundState { config } => {
            let mut scenario = load(&config)?;
            scenario.mode = Some("bound-state".to_string());
            let outputs = scenario::run_scenario(&scenario)?;
            scenario::write_series(&outdir, &outputs)?;
            for output in &outputs {
                println!("{}", output.summary.to_json_line());
            }
        }
        Command::Compare { config } => {
            let output = scenario::run_compare(&load(&config)?)?;
            scenario::write_atomic(&outdir, &output.file_name, &output.csv)?;
            println!(
                "{}",
                serde_json::to_string(&output.report).expect("report serializes")
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
