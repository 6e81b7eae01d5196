use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} {what}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid preference order: {0}")]
    InvalidOrder(String),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid model:\n{}", format_violations(.0))]
    InvalidModel(Vec<Violation>),
    #[error("{what} too large: {size} exceeds limit {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn guard(what: &'static str, size: u128, limit: u128) -> Self {
        Error::GuardExceeded { what, size, limit }
    }
}

/// One problem found while validating an uncertainty model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Probabilities of one distribution do not add up to one.
    SumNotOne(String),
    NonPositiveProbability(String),
    DuplicateOrder,
    DuplicateProfile,
    EmptySupport,
    Dimension { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.location)?;
        match &self.kind {
            ViolationKind::SumNotOne(sum) => write!(f, "probabilities sum to {sum}, not 1"),
            ViolationKind::NonPositiveProbability(p) => write!(f, "probability {p} is not positive"),
            ViolationKind::DuplicateOrder => write!(f, "duplicate preference order"),
            ViolationKind::DuplicateProfile => write!(f, "duplicate profile"),
            ViolationKind::EmptySupport => write!(f, "empty support"),
            ViolationKind::Dimension { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
        }
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
