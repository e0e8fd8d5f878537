//! Library half of the `lambda-sieve` binary: argument parsing, the
//! per-command drivers and table output. The binary only maps results to
//! exit codes.

pub mod args;
pub mod checkpoint;
pub mod commands;
pub mod output;
pub mod rows;

use std::fmt;

pub use args::{Cli, Command, Format};
pub use commands::{run, ScanConfig};
pub use output::{Rendered, Table, SCHEMA_VERSION};

/// Command failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Rejected arguments; exit code 2.
    Usage(String),
    /// Anything that went wrong after the arguments were accepted; exit code 1.
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "invalid arguments: {msg}"),
            CliError::Runtime(err) => write!(f, "{err:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError::Runtime(err)
    }
}

impl From<lambda_sieve_core::Error> for CliError {
    fn from(err: lambda_sieve_core::Error) -> Self {
        CliError::Runtime(err.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
