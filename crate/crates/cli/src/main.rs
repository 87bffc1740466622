use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bhclock_cli::config::split_assignment;
use bhclock_cli::report::write_outcome;
use bhclock_cli::run::{EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK};
use bhclock_cli::{parse_config, run, Command, Overrides, RunError, RunReport};
use bhclock_core::units::UnitSystem;
use bhclock_core::Execution;
use clap::Parser;

/// Runs one experiment of the black-hole clock model and writes CSV/JSON
/// artifacts plus `checks.csv` to the output directory.
#[derive(Debug, Parser)]
#[command(name = "bhclock", version)]
struct Cli {
    command: Command,
    /// INI-like `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_units)]
    units: Option<UnitSystem>,
    /// Output directory [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomised sweeps.
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter override, repeatable.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Run every scan on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn parse_units(s: &str) -> Result<UnitSystem, String> {
    s.parse().map_err(|e: bhclock_core::Error| e.to_string())
}

fn execute(cli: Cli) -> Result<RunReport, RunError> {
    let params = cli
        .params
        .iter()
        .map(|p| split_assignment(p))
        .collect::<Result<Vec<_>, _>>()?;
    let overrides = Overrides {
        units: cli.units,
        out: cli.out,
        seed: cli.seed,
        params,
    };
    let cfg = parse_config(cli.command, cli.config.as_deref(), &overrides)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let start = Instant::now();
    let outcome = run(&cfg, exec)?;
    let artifacts = write_outcome(&cfg.out, &outcome)?;
    Ok(RunReport {
        command: cfg.command.to_string(),
        wall_time: start.elapsed(),
        checks: outcome.checks,
        artifacts,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    match execute(cli) {
        Ok(report) => {
            print!("{}", report.summary());
            let code = if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            };
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
