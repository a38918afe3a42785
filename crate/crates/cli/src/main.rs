mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command};

/// An invalid combination of otherwise well-formed options; exits like a
/// parse error.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global()?;
    }
    match &cli.command {
        Command::Scores(a) => commands::scores(a),
        Command::Select(a) => commands::select(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::FitLogic(a) => commands::fit_logic(a),
        Command::Experiment(s) => commands::experiment(s),
        Command::Raster(a) => commands::raster(a),
        Command::Preprocess(a) => commands::preprocess(a),
    }
}

fn main() -> ExitCode {
    let matches = match config::parse_with_config(Cli::command(), std::env::args_os().collect()) {
        Ok(m) => m,
        Err(e) => e.exit(),
    };
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(u) = e.downcast_ref::<Usage>() {
                Cli::command().error(ErrorKind::ArgumentConflict, &u.0).exit();
            }
            let line = format!("{e:#}").replace('\n', " ");
            eprintln!("xlev: error: {line}");
            ExitCode::FAILURE
        }
    }
}
