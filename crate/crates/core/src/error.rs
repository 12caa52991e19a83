use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("generator is not admissible at index {index}: {reason}")]
    Generator { index: u64, reason: String },
    #[error("type bound violated at coefficient {index}: {detail}")]
    TypeBound { index: u64, detail: String },
    #[error("no ground-truth certificate available: {0}")]
    NoCertificate(String),
    #[error("oracle cannot answer: {0}")]
    OracleUnavailable(String),
    #[error("non-finite supremum detected in row {row}")]
    NonFiniteSup { row: u64 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("evaluation error at column {column}: {message}")]
    Eval { column: usize, message: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
