//! Configuration, orchestration and output for the `h2sim` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::RunConfig;
pub use error::CliError;
