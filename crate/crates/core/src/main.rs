use std::process::ExitCode;

use clap::Parser;

use liealg::cli::{run, Cli, RunConfig, SEED_ENV};
use liealg::Error;

fn execute(cli: Cli) -> Result<usize, Error> {
    let config_text = match &cli.config {
        Some(path) => Some(std::fs::read_to_string(path)?),
        None => None,
    };
    let seed = std::env::var(SEED_ENV).ok();
    let config = RunConfig::resolve(cli, config_text.as_deref(), seed.as_deref())?;
    let output = run(&config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &output.text)?,
        None => print!("{}", output.text),
    }
    Ok(output.failures)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("{failures} audit case(s) failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
