use std::process::ExitCode;

use clap::Parser;
use qfload::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::init();
    match run(&Cli::parse()) {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
