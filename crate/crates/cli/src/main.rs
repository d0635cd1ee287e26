use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use probetree_cli::app::{run, Cli};
use probetree_cli::EXIT_ERROR;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(v) => v.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("probetree: {e}");
            EXIT_ERROR
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
