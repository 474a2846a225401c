//! Library side of the `lueratio` batch tool: argument validation, the
//! command implementations, output formats, the trajectory cache and the
//! acceptance criteria.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;

use clap::Parser;

pub use commands::run;
pub use config::{Args, RunConfig};
pub use error::CliError;

/// Parses `argv`, runs it and returns the process exit code. Help and
/// version requests exit 0; every failure also writes a JSON error record
/// to standard error.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            if code != 0 {
                let err = CliError::Config { field: "arguments", message: e.kind().to_string() };
                eprintln!("{}", err.record());
            }
            return code;
        }
    };
    match RunConfig::from_args(args).and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
