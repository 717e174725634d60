//! File formats and command dispatch for the `wtgp` binary.

pub mod config;
pub mod error;
pub mod export;
pub mod model_file;
pub mod run;

pub use error::{CliError, CliResult};
