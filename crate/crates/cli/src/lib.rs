//! Command-line experiments for `mcmc-confidence-core`.
//!
//! Each subcommand writes tidy CSV series plus a `manifest.txt` from which
//! the run can be repeated byte for byte.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod io;

pub use error::CliError;
