//! `qcva`: exact verification suites and dimension tables for the vertex
//! algebra of an abelian current algebra.
//!
//! Exit codes: 0 when every check passes, 1 when a counterexample is found,
//! 2 on a usage or configuration error.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ConfigError;
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "qcva", version, about = "Exact checks for the vertex algebra M(l) and its modules")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Worker threads for sweeps (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep an identity over a truncated basis.
    Verify(commands::VerifyArgs),
    /// Graded dimensions of M(l), computed three ways plus the constant-term formula.
    Dims(commands::DimsArgs),
    /// Top-space data of a module.
    #[command(subcommand)]
    Module(commands::ModuleCommand),
}

/// Outcome of a command: the rendered output and whether all checks passed.
pub struct Rendered {
    pub text: String,
    pub pass: bool,
}

fn run(cli: Cli) -> Result<Rendered, ConfigError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError::new(e.to_string()))?;
    }
    match cli.command {
        Command::Verify(args) => commands::verify(&args, cli.format, cli.seed),
        Command::Dims(args) => commands::dims(&args, cli.format),
        Command::Module(cmd) => commands::module(&cmd, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let rendered = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, &rendered.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", rendered.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if rendered.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
