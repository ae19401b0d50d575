use thiserror::Error;

/// Errors raised by the graph builders, routing and analysis code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension m={m} out of range [{min}, {max}]")]
    DimensionOutOfRange { m: usize, min: usize, max: usize },

    #[error("direction {value} out of range [1, {m}]")]
    DirectionOutOfRange { value: usize, m: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid cluster strategy: {0}")]
    InvalidStrategy(String),

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("wrong graph stage: expected {expected}, found {found}")]
    WrongStage { expected: &'static str, found: &'static str },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("separator balance failure: |A|={a}, |B|={b}, |C|={c}, n={n}")]
    Balance { a: usize, b: usize, c: usize, n: usize },

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("eigensolver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("label mismatch after contraction: {0}")]
    LabelMismatch(String),

    #[error("empty phi table")]
    EmptyTable,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
