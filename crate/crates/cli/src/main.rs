use std::process::ExitCode;
use std::time::Instant;

use cayley_qmc_cli::args::Cli;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = cayley_qmc_cli::run(&cli);
    // timing goes to stderr so stdout stays byte-identical across runs
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
