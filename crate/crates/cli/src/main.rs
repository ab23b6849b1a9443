//! `hyperdyn`: batch driver for density, family, construction, obstruction and
//! algebra experiments. Reports are JSON or CSV and embed the full config.
//!
//! Exit codes: 0 success, 1 invalid config, 2 premise not met, 3 an invariant
//! the theory guarantees was violated.

mod commands;
mod parse;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "hyperdyn", version, about = "Experiments on frequently hypercyclic vectors and their powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density ladders for a generated index set.
    Density(commands::density::Args),
    /// Dyadic families A(l,m) and their gap conditions.
    Family(commands::family::Args),
    /// Build an A-hypercyclic vector on a geometric system and certify its orbit.
    Construct(commands::construct::Args),
    /// Power obstructions, weight series and B_w bounds.
    Nogo(commands::nogo::Args),
    /// Algebra products: axiom checks, monomials and independence witnesses.
    Algebra(commands::algebra::Args),
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HYPERDYN_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::config(format!("HYPERDYN_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    init_threads()?;
    let out = match &cli.command {
        Command::Density(a) => commands::density::run(a)?,
        Command::Family(a) => commands::family::run(a)?,
        Command::Construct(a) => commands::construct::run(a)?,
        Command::Nogo(a) => commands::nogo::run(a)?,
        Command::Algebra(a) => commands::algebra::run(a)?,
    };
    let text = out.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(msg) = out.failure_message() {
        eprintln!("hyperdyn: {msg}");
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("hyperdyn: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
