use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixruin_cli::{commands, output, CliError, RunConfig, UGrid};

#[derive(Debug, Parser)]
#[command(name = "mixruin", version, about = "Ruin probabilities for the mixed Poisson surplus model")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Model configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output CSV path; overrides [output].path. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Evaluation grid as start:stop:step; overrides [grid].
    #[arg(long = "u-grid", global = true)]
    u_grid: Option<String>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Exact ruin probability (exponential size laws).
    ClosedForm,
    /// Numerical solution of the renewal equation, per mixing atom.
    Solve,
    /// Monte Carlo estimate with 95% Wilson intervals.
    Simulate,
    /// Closed form, solver and simulation side by side.
    Compare,
    /// Mean and variance of the surplus at the grid times.
    Moments,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::config("--config <path> is required"))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(g) = &cli.u_grid {
        cfg.u_grid = UGrid::parse(g)?;
    }
    let result = match cli.command {
        Command::ClosedForm => commands::closed_form(&cfg),
        Command::Solve => commands::solve(&cfg),
        Command::Simulate => commands::simulate(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::Moments => commands::moments(&cfg),
    }?;
    let out = cli.out.as_deref().or(cfg.output_path.as_deref());
    output::emit(&result.table.to_csv(), out)?;
    if let Some(summary) = result.summary {
        eprintln!("{summary}");
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for unsupported laws here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(mixruin_cli::error::EXIT_CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mixruin: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
