use std::process::ExitCode;

use clap::Parser;
use flatwall_cli::{execute, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli, &mut std::io::stdout().lock()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
