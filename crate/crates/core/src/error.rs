use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid diagram: {0}")]
    Topology(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("bit error: {0}")]
    Bit(String),

    #[error("configurations belong to different diagrams")]
    DiagramMismatch,

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("not a chain complex: {0}")]
    Complex(String),

    #[error("(q + q^-1) does not divide {0}")]
    Divisibility(String),

    #[error("expected index {expected}, got {actual}")]
    Index { expected: usize, actual: usize },

    #[error("axiom {axiom} violated at stratum {stratum}")]
    AxiomViolation { axiom: String, stratum: String },

    #[error("invalid skeleton: {0}")]
    Skeleton(String),
}

impl Error {
    pub(crate) fn topology(msg: impl Into<String>) -> Self {
        Error::Topology(msg.into())
    }
}
