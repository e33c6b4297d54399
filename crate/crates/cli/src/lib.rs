//! Command-line front end for `lehmer-core`: a rayon driver for the search's
//! subtree tasks, the JSONL/CSV/table record formats, and the `spoof-lehmer`
//! subcommands.

pub mod commands;
pub mod error;
pub mod record;
pub mod runner;

use std::ffi::OsString;

use clap::Parser;

pub use commands::{Cli, Command, Summary};
pub use error::{CliError, EXIT_FAILED, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE};
pub use record::{Format, OutputRecord};

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap uses 0 for --help/--version and 2 for usage errors
            return u8::try_from(e.exit_code()).unwrap_or(EXIT_USAGE);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
