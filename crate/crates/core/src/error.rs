use thiserror::Error;

use crate::lattice::LatticePoint;

/// Errors produced anywhere in the crate.
///
/// Variants map onto the CLI exit-code contract via [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid degree {0}: degree must be at least 1")]
    InvalidDegree(i64),

    #[error("point {point} is outside the lattice triangle of degree {degree}")]
    PointOutOfRange { point: LatticePoint, degree: u32 },

    #[error("duplicate edge {a}-{b}")]
    DuplicateEdge { a: LatticePoint, b: LatticePoint },

    #[error("not a triangulation: {0}")]
    NotATriangulation(String),

    #[error("not unimodular: {0}")]
    NotUnimodular(String),

    #[error("no lifting induces this triangulation: {0}")]
    NotRegular(String),

    #[error("unknown builtin triangulation `{0}`")]
    UnknownBuiltin(String),

    #[error("degree mismatch: triangulation has degree {triangulation}, input has degree {other}")]
    DegreeMismatch { triangulation: u32, other: u32 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: u128, limit: u128 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("cannot merge reports: {0}")]
    MergeMismatch(String),

    #[error("classification failed at sign index {index}: {source}")]
    Sweep {
        index: u128,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code: 2 for bad input, 3 for invariant violations,
    /// 4 for budget overruns.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 3,
            Error::Sweep { source, .. } => source.exit_code(),
            Error::BudgetExceeded(_) => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
