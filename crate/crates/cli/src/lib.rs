//! Command-line front end: synthetic data and masks, completion runs with a
//! trace and a manifest, and evaluation.
//!
//! Exit codes are `0` on success, `2` for usage errors, `3` for I/O failures
//! and `4` for numerical failures.

mod args;
mod commands;
mod error;
mod manifest;

use std::ffi::OsString;

use clap::Parser;

pub use args::{triple, Algo, Cli, Command, Preset};
pub use commands::{load_tensor, save_tensor};
pub use error::{CliError, Result};
pub use manifest::{manifest_path, RunManifest};

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
