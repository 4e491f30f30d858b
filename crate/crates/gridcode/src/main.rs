use std::process::ExitCode;

use clap::Parser;
use gridcode::cli::{run, Cli};
use gridcode::runner::Parallel;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Parallel::from_env().and_then(|runner| run(&cli, &runner)).and_then(|out| match &cli.out {
        Some(path) => std::fs::write(path, out).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display())),
        None => {
            print!("{out}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
