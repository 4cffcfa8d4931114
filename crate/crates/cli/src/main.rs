//! Scenario runner for two atoms coupled through an interface plasmon.

mod commands;
mod config;
mod error;
mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

use commands::{Format, RunOptions};
use error::CliError;

#[derive(Parser)]
#[command(name = "plasmon-pair", version, about = "Simulate plasmon-mediated dynamics and entanglement of two atoms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory table and summary.
    Simulate(RunArgs),
    /// Compare the closed-form solution with both numerical oracles.
    Verify(RunArgs),
    /// Compare Green-function quadrature with the closed forms and rebuild the kernel.
    GreensCheck(RunArgs),
    /// Run the cross product of all sweep axes in parallel.
    Sweep(RunArgs),
    /// Report the regime of each collective mode.
    Classify(RunArgs),
    /// List bundled scenario files, or print one.
    Presets {
        /// Print this preset instead of listing all.
        #[arg(long)]
        preset: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled scenario name (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory; without it results go to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Override one configuration entry, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl From<RunArgs> for RunOptions {
    fn from(a: RunArgs) -> Self {
        RunOptions {
            config: a.config,
            preset: a.preset,
            out: a.out,
            format: a.format,
            set: a.set,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, name) = match cli.command {
        Command::Simulate(a) => (commands::simulate(&a.into()), "simulate"),
        Command::Verify(a) => (commands::verify(&a.into()), "verify"),
        Command::GreensCheck(a) => (commands::greens_check(&a.into()), "greens-check"),
        Command::Sweep(a) => (commands::sweep(&a.into()), "sweep"),
        Command::Classify(a) => (commands::classify(&a.into()), "classify"),
        Command::Presets { preset } => (commands::list_presets(preset.as_deref()), "presets"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    let _ = sub.print_help();
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
