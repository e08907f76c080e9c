//! Command implementations behind the `qexp` binary.
//!
//! Each command returns a [`CommandOutput`] instead of printing, so the same
//! code paths are exercised by tests and by the binary.

pub mod family;
pub mod output;
pub mod table;
pub mod verify;

use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for internal assertion or verification failures.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for bad arguments or malformed input.
pub const EXIT_USAGE: i32 = 2;

/// Largest `n` accepted by the table and family commands.
pub const DEFAULT_N_CAP: usize = 24;

/// Environment variable capping worker threads for oracle scans.
pub const WORKERS_ENV: &str = "QEXP_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_FAILURE,
        }
    }
}

impl From<qexp::Error> for CliError {
    fn from(e: qexp::Error) -> Self {
        match e {
            qexp::Error::InvalidFieldOrder(_) | qexp::Error::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

/// What a command would print and the status it would exit with.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    pub fn from_result(result: Result<(String, String), CliError>) -> Self {
        match result {
            Ok((stdout, stderr)) => Self {
                code: EXIT_OK,
                stdout,
                stderr,
            },
            Err(e) => Self {
                code: e.exit_code(),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        }
    }
}

/// Worker count from [`WORKERS_ENV`], falling back to the available
/// parallelism.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn prime_power_warning(q: qexp::FieldOrder) -> String {
    if q.is_prime_power() {
        String::new()
    } else {
        format!("warning: q={q} is not a prime power; counts are formal values only\n")
    }
}
