pub mod cli;
pub mod experiment;
pub mod report;

use std::fmt;

use hermite_lab_core::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug)]
pub enum LabError {
    Core(Error),
    Config(String),
    Mismatch(String),
    Io(std::io::Error),
    Json(serde_json::Error),
    Csv(csv::Error),
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(e) if e.is_precision() => EXIT_PRECISION,
            LabError::Core(_) | LabError::Config(_) => EXIT_PARSE,
            LabError::Mismatch(_) => EXIT_MISMATCH,
            LabError::Io(_) | LabError::Json(_) | LabError::Csv(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Core(e) => write!(f, "{e}"),
            LabError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            LabError::Mismatch(msg) => write!(f, "verification failed: {msg}"),
            LabError::Io(e) => write!(f, "io error: {e}"),
            LabError::Json(e) => write!(f, "json error: {e}"),
            LabError::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl std::error::Error for LabError {}

impl From<Error> for LabError {
    fn from(e: Error) -> Self {
        LabError::Core(e)
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e)
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Json(e)
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Csv(e)
    }
}
