use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not supported here")]
    DimensionTooLarge(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid gate: control {control}, target {target} on {n} lines")]
    InvalidGate {
        control: usize,
        target: usize,
        n: usize,
    },

    #[error("{method} produced a circuit that does not match its {n}-line input")]
    Verification { method: String, n: usize },

    #[error("malformed distance table: {0}")]
    BadTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
