mod args;
mod commands;
mod config;
mod error;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::ConfigFile;
use error::{CliError, CliResult, EXIT_RUNTIME, EXIT_USAGE};

fn run(cli: Cli, argv: &[String]) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError { code: EXIT_RUNTIME, msg: e.to_string() })?;
    }
    let mut cfg = ConfigFile::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Preprocess(a) => commands::run_preprocess(a, &mut cfg, argv),
        Command::TuneHyper(a) => commands::run_tune(a, &mut cfg, argv),
        Command::FitStatic(a) => commands::run_fit_static(a, &mut cfg, argv),
        Command::FitDynamic(a) => commands::run_fit_dynamic(a, &mut cfg, argv),
        Command::Predict(a) => commands::run_predict(a, &mut cfg, argv),
        Command::Waic(a) => commands::run_waic(a, &mut cfg, argv),
        Command::Rank(a) => commands::run_rank(a, &mut cfg, argv),
        Command::Curves(a) => commands::run_curves(a, &mut cfg, argv),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pum: error: {e}");
            ExitCode::from(e.code)
        }
    }
}
