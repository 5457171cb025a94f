//! Command implementations behind the `linedec` binary.
//!
//! Every subcommand lives here as a plain function over its parsed
//! arguments so the integration and acceptance suites can drive the exact
//! production code paths in-process.

pub mod commands;
pub mod error;
pub mod manifest;

pub use error::CliError;
