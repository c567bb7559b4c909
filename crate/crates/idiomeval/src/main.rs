use std::panic;
use std::process::ExitCode;

use clap::Parser;
use idiomeval::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal invariant violated (panic)");
            ExitCode::from(3)
        }
    }
}
