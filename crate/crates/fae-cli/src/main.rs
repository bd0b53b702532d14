//! Binary entry point. Maps outcomes onto the exit-code contract:
//! 0 success (including --help/--version), 1 domain or usage error,
//! 2 I/O error, 3 verification-suite failure.

use std::process::ExitCode;

use clap::Parser;

use fae_cli::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests print to stdout and succeed; real
            // usage errors print to stderr and count as domain errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
