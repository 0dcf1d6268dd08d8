//! Seeded, config-driven experiment runner. Every run writes CSV plot data
//! plus a manifest; identical configurations produce byte-identical CSVs.

mod config;
mod output;
mod registry;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::Config;
use output::Outputs;
use scenarios::{RunContext, RunError};

#[derive(Parser)]
#[command(name = "wietsim", about = "WIET link-level simulation scenarios", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario and write its CSV outputs.
    Run {
        #[arg(long)]
        scenario: String,
        /// Flat `key = value` configuration file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed override; otherwise the config's `seed` (default 1).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for CSV files and the manifest.
        #[arg(long)]
        out: PathBuf,
    },
    /// List known scenarios with their configuration keys.
    ListScenarios,
}

fn run_scenario(
    name: &str,
    config_path: Option<PathBuf>,
    seed_override: Option<u64>,
    out_dir: PathBuf,
) -> Result<(), RunError> {
    let Some(scenario) = registry::find(name) else {
        let names: Vec<&str> = registry::scenarios().iter().map(|s| s.name).collect();
        return Err(RunError::Config(config::ConfigError {
            message: format!("unknown scenario `{name}`; valid names: {}", names.join(", ")),
            line: None,
        }));
    };
    let cfg = match config_path {
        None => Config::default(),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(RunError::Io)?;
            Config::parse(&text)?
        }
    };
    cfg.check_allowed(scenario.keys)?;
    let seed = match seed_override {
        Some(s) => s,
        None => cfg.u64_or("seed", 1)?,
    };
    let start = Instant::now();
    let mut outputs = Outputs::new(&out_dir);
    {
        let mut ctx = RunContext { cfg: &cfg, seed, out: &mut outputs };
        (scenario.run)(&mut ctx)?;
    }
    let written = outputs
        .write_all(name, seed, start.elapsed().as_millis())
        .map_err(RunError::Io)?;
    println!("{name}: wrote {} file(s) to {}", written.len(), out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListScenarios => {
            for s in registry::scenarios() {
                println!("{}", s.name);
                println!("    {}", s.description);
                println!("    keys: seed, {}", s.keys.join(", "));
            }
            ExitCode::SUCCESS
        }
        Command::Run { scenario, config, seed, out } => {
            match run_scenario(&scenario, config, seed, out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
