//! Library half of the `bellforge` binary: argument-independent command
//! implementations and the JSON report format.

pub mod commands;
pub mod report;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECKS_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INVALID_INPUT: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidInput(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::InvalidInput(_) => exit::INVALID_INPUT,
        }
    }
}
