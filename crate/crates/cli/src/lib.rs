//! JSON plumbing and error mapping for the `getzler` command-line tool.

pub mod error;
pub mod json;

pub use error::CliError;
