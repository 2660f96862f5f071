//! Command-line front end, file formats and parallel drivers for `mmd-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use error::{CliError, Result};
