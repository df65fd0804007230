// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario-driven command line for simulating the dissipative
//! entanglement dynamics of two dark-soliton qubits coupled to the
//! phonon bath of a quasi-1D condensate.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CommandContext;
use config::ScenarioConfig;
use error::{CliError, Result};
use output::OutputFormat;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "soliq",
    version,
    about = "Dissipative entanglement dynamics of two dark-soliton qubits in a quasi-1D condensate"
)]
struct Cli {
    /// Scenario file (TOML, or JSON with a .json extension).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory that receives the artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    /// Table artifact format (event and estimate reports are always JSON).
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Evolve closed-form solutions with the literal (uncorrected) sign of
    /// the antisymmetric-coherence decay exponent.
    #[arg(long = "paper-literal", global = true)]
    paper_literal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the collective decay rates over a separation grid.
    Rates,
    /// Evolve an initial state and detect entanglement death/revival.
    Evolve,
    /// SI-unit experimental estimate with a fitted chemical potential.
    Estimate,
    /// Run the built-in numerical cross-checks.
    Selftest,
}

fn require_config(cli: &Cli) -> Result<ScenarioConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::config("--config <PATH> is required for this subcommand"))?;
    ScenarioConfig::load(path)
}

fn run(cli: &Cli) -> Result<()> {
    let ctx = CommandContext {
        out_dir: cli.out.clone(),
        format: match cli.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        },
        literal_branch: cli.paper_literal,
    };
    match cli.command {
        Command::Rates => commands::cmd_rates(&require_config(cli)?, &ctx),
        Command::Evolve => commands::cmd_evolve(&require_config(cli)?, &ctx),
        Command::Estimate => commands::cmd_estimate(&require_config(cli)?, &ctx),
        Command::Selftest => commands::cmd_selftest(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests exit 0; argument errors follow the
            // configuration-error exit code.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("soliq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
