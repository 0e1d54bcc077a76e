use std::process::ExitCode;

use clap::Parser;
use netfeat::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.error());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
