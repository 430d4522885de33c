//! Command-line surface of `logrank-core`: instance generators, single
//! analyses and seeded experiment grids with JSON/CSV reports.

pub mod args;
pub mod commands;
pub mod experiments;
pub mod io;
pub mod report;

pub use args::Cli;
pub use report::{Report, Status};

use clap::Parser;
use logrank_core::ErrorClass;

/// Parses `argv` and runs it; returns the exit code. Usage problems
/// (bad flags, unreadable input, impossible parameters) exit with 1.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::NotFound => 2,
                ErrorClass::Invariant => 3,
            }
        }
    }
}
