//! Library side of the command-line front end: scenario file IO, report
//! rendering, and family building, shared by the binary and the tests.

pub mod build;
pub mod report;
pub mod scenario_io;

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Expr { field: String, message: String },
    #[error("{0}")]
    Value(String),
    #[error("{0}")]
    Family(walker3::families::FamilyError),
    #[error("sampling exhausted: no admissible points found")]
    Exhausted,
}
