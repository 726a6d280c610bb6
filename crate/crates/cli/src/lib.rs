//! Command-line front end for `mixruin-core`: TOML configs in, CSV tables out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::CommandOutput;
pub use config::{RunConfig, UGrid};
pub use error::CliError;
