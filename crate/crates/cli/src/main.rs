use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use serde_json::Value;

mod config;
mod output;
mod run;

use config::{Command, Format, Overrides, RunConfig};

/// White-noise dynamics of two Ising-coupled spins in Ohmic baths.
///
/// Parameters default to a symmetric system in effective units
/// (bar_delta = 1, v = 0.5, theta = 0.2, K = 0.05). Override them with
/// `--set key=value`; `theta`, `bar_delta`, `delta` and `k` set both spins.
#[derive(Debug, Parser)]
#[command(name = "spin2", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// JSON file with keys mirroring the run configuration.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "replay")]
    config: Option<PathBuf>,

    /// Override one configuration value; dotted keys reach nested fields.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", conflicts_with = "replay")]
    sets: Vec<String>,

    /// Output file (standard output when absent).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Re-run the configuration echoed in a previous JSON output.
    #[arg(long, global = true, value_name = "FILE")]
    replay: Option<PathBuf>,
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))
}

fn load(cli: &Cli) -> Result<RunConfig> {
    if let Some(path) = &cli.replay {
        if cli.command.is_some() {
            bail!("--replay takes the subcommand from the replayed file");
        }
        let echoed = read_json(path)?
            .get("config")
            .cloned()
            .ok_or_else(|| anyhow!("{} has no `config` echo", path.display()))?;
        let mut config: RunConfig = serde_json::from_value(echoed).context("invalid replayed configuration")?;
        if let Some(f) = cli.format {
            config.format = f;
        }
        config.validate()?;
        return Ok(config);
    }
    let file = cli.config.as_ref().map(read_json).transpose()?;
    RunConfig::build(Overrides {
        file,
        command: cli.command,
        format: cli.format,
        sets: &cli.sets,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli).and_then(|config| {
        let outcome = run::run(&config)?;
        let bytes = output::render(&config, &outcome.report)?;
        output::emit(&bytes, cli.out.as_deref())?;
        Ok(outcome.oracle_failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: oracle deviation exceeds tolerance");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
