//! File formats, command dispatch and reports for the `vonlab` command line.
//!
//! Exit codes: 0 success, 1 invalid input (including bad arguments and
//! unwritable output), 2 numerical tolerance breakdown.

pub mod cli;
pub mod docs;
pub mod error;
pub mod run;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::CliError;

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code; errors go to stderr as JSON.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&e.to_json()).unwrap_or_default());
            e.exit_code()
        }
    }
}

fn execute(cli: &cli::Cli) -> Result<(), CliError> {
    let report = run::run_command(&cli.command, &cli.opts)?;
    let text = docs::to_json(&report);
    match &cli.opts.output {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::validation(format!("stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}
