//! `roguewave` — drive the analytic rogue-wave construction from scenario
//! files and emit plot-ready CSV/JSON.

// Negated comparisons are deliberate NaN guards, as in the library crate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod scenario;

use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// CLI failure classes, mapped onto stable exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 2).
    Config(String),
    /// Numerical non-convergence or solver failure (exit 3).
    Numerical(String),
    /// Admissibility failure under `--strict` (exit 4).
    Admissibility(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Admissibility(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Admissibility(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "roguewave",
    version,
    about = "Rogue-wave construction on the shallow-water equations with friction"
)]
struct Cli {
    /// Promote admissibility warnings to a hard failure (exit 4).
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario and print the configuration summary as JSON.
    Setup {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Sample the water surface at time t as CSV (x,q,m,side).
    Profile {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long = "x-min", allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long = "x-max", allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long)]
        dx: f64,
    },
    /// Track the shock over the scenario horizon; CSV time series.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Export the two wave lines and the jump locus as CSV (branch,q,m).
    PhasePlane {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Cross-check the construction against the finite-volume solver; JSON report.
    ValidateFv {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        dx: f64,
        #[arg(long, default_value_t = 0.45)]
        cfl: f64,
        #[arg(long = "t-end")]
        t_end: f64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Setup { scenario } => {
            let res = scenario::load(&scenario, cli.strict)?;
            commands::setup(&res)
        }
        Command::Profile { scenario, t, x_min, x_max, dx } => {
            let res = scenario::load(&scenario, cli.strict)?;
            commands::profile(&res, t, x_min, x_max, dx)
        }
        Command::Simulate { scenario } => {
            let res = scenario::load(&scenario, cli.strict)?;
            commands::run_simulation(&res)
        }
        Command::PhasePlane { scenario, n } => {
            let res = scenario::load(&scenario, cli.strict)?;
            commands::phase_plane(&res, n)
        }
        Command::ValidateFv { scenario, dx, cfl, t_end } => {
            let res = scenario::load(&scenario, cli.strict)?;
            commands::validate_fv(&res, dx, cfl, t_end)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
