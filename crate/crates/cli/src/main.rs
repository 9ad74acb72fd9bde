//! `crs-noma-lab`: CSV performance tables for a NOMA-based cooperative
//! relaying system with receive diversity over Nakagami-m fading.

mod args;
mod commands;
mod report;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
