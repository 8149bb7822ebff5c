mod args;
mod checks;
mod construct;
mod error;
mod extend;
mod inspect;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use manifest::Manifest;

/// Caps the worker count; estimates do not depend on it.
const THREADS_ENV: &str = "OVERFIT_FORGE_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn run(cli: Cli, argv: &[String]) -> CliResult<()> {
    match &cli.command {
        Command::Construct(a) => construct::run(a, argv),
        Command::Extend(a) => extend::run(a, argv),
        Command::Evaluate(a) => inspect::evaluate(a, argv),
        Command::Verify(a) => checks::verify(a, argv),
        Command::Support(a) => checks::support(a, argv),
        Command::DeadZone(a) => checks::dead_zone_cmd(a, argv),
        Command::PlotData(a) => inspect::plot_data(a, argv),
        Command::ImageAccuracy(a) => checks::image_accuracy(a, argv),
        Command::Replay(a) => {
            let manifest = Manifest::load(&a.manifest)?;
            let replayed = Cli::try_parse_from(std::iter::once("overfit-forge".to_string()).chain(manifest.args.clone()))
                .map_err(|e| CliError::usage(format!("manifest arguments no longer parse: {e}")))?;
            if matches!(replayed.command, Command::Replay(_)) {
                return Err(CliError::usage("a manifest cannot replay another replay"));
            }
            run(replayed, &manifest.args)
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli, &argv));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
