use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use spidermoment_cli::{run, Cli, Outcome, EXIT_FAILURE, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => EXIT_FAILURE,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
