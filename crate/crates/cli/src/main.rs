use std::process::ExitCode;

use clap::Parser;
use stablereg_cli::commands::configure_threads;
use stablereg_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli, &mut std::io::stdout().lock()));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("stablereg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
