use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dictcode_cli::{run, write_file, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<ExitCode, CliError> {
    let outcome = run(cli)?;
    match &cli.out {
        Some(path) => write_file(path, &outcome.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    for (path, text) in &outcome.files {
        write_file(path, text)?;
    }
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    match outcome.infeasible {
        Some(reason) => {
            eprintln!("infeasible: {reason}");
            Ok(ExitCode::from(2))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}
