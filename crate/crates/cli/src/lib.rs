//! Library side of the `cnp` command: problem-file parsing and one function
//! per subcommand. Each command returns a report and an exit status; the
//! binary only prints.

pub mod commands;
pub mod problem;

use thiserror::Error;

/// Version tag of every JSON document the tool emits.
pub const SCHEMA: &str = "cnp/1";

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Feasible, PASS, or a successful run.
    Ok = 0,
    /// Infeasible, a necessity witness, or a failed verification.
    Infeasible = 1,
    Undetermined = 2,
    /// Bad input file, flag or environment value.
    Usage = 64,
    /// A computation failed.
    Software = 70,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] cnp_core::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Parse(_) | CliError::Read { .. } => Status::Usage,
            CliError::Write { .. } | CliError::Numeric(_) => Status::Software,
        }
    }
}

/// A finished command: exit status, JSON document and a short text summary.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub json: serde_json::Value,
    pub text: String,
}
