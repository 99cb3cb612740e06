use std::io::Write;
use std::process::ExitCode;

use campanato_cli::{execute, CliError, RunConfig};
use clap::error::ErrorKind;
use clap::Parser;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CAMPANATO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("CAMPANATO_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(config: &RunConfig) -> Result<(), CliError> {
    configure_threads()?;
    let report = execute(config)?;
    let bytes = report.render()?;
    match &config.options.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    for name in report.failures() {
        eprintln!("check failed: {name}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
