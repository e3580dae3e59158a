use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kloos::cli::{run, Cli};
use kloos::CliError;

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = match run(&cli) {
        Ok(out) => emit(&cli, &out.text).err().or(out.failure),
        Err(e) => Some(e),
    };
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("kloos: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
