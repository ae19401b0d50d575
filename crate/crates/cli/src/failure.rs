use std::fmt;

use ncc_core::Error;

/// A failed run: exit code 1 for invariant or verification failures, 2 for
/// bad arguments or inputs.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    name: &'static str,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, name: "usage", message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 1, name: "io", message: message.into() }
    }

    pub fn invariant(name: &'static str, message: impl Into<String>) -> Self {
        Self { code: 1, name, message: message.into() }
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.name, self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, name) = match &e {
            Error::DimensionOutOfRange { .. } => (2, "dimension-range"),
            Error::DirectionOutOfRange { .. } => (2, "direction-range"),
            Error::Precondition(_) => (2, "precondition"),
            Error::Parse(_) => (2, "parse"),
            Error::UnknownLabel(_) => (2, "unknown-label"),
            Error::WrongStage { .. } => (2, "wrong-stage"),
            Error::BudgetExceeded(_) => (2, "budget"),
            Error::InvalidStrategy(_) => (1, "strategy-valid"),
            Error::Balance { .. } => (1, "separator-balance"),
            Error::NotAPartition(_) => (1, "separator-partition"),
            Error::Disconnected => (1, "connected"),
            Error::NoConvergence(_) => (1, "spectral-convergence"),
            Error::LabelMismatch(_) => (1, "contraction"),
            Error::EmptyTable => (1, "phi-table"),
        };
        Self { code, name, message: e.to_string() }
    }
}
