use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid combinatorial type: {axiom} (witness {witness:?})")]
    Validation { axiom: String, witness: Vec<usize> },

    #[error("kernel is not in chart {0:?}")]
    NotInChart(Vec<usize>),

    #[error("unsupported combinatorial type: {0}")]
    Unsupported(String),

    #[error("calibration lies outside the closed stratum: {0}")]
    OutsideClosure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
