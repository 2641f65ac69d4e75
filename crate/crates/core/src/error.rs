use thiserror::Error;

use crate::linalg::Field;

/// Errors raised by the engine.
///
/// `InvariantViolated` marks an internal bug (a broken identity that should hold by
/// construction); every other variant is a rejected input or a refused computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("unsupported field {0:?}")]
    UnsupportedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {degree} is beyond the trusted range (cap {cap})")]
    UntrustedDegree { degree: usize, cap: usize },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("d∘d ≠ 0 in degree {degree}")]
    NotAComplex { degree: usize },
    #[error("not a chain map: square fails in degree {degree}")]
    NotAChainMap { degree: usize },
    #[error("diagram invalid: {0}")]
    DiagramInvalid(String),
    #[error("dimension guard exceeded: {needed} > {guard} ({what})")]
    GuardExceeded { what: String, needed: usize, guard: usize },
    #[error("truncation unsound: {0}")]
    TruncationUnsound(String),
    #[error("descent failure: {0}")]
    DescentFailure(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("monoid law fails: {0}")]
    MonoidLaw(String),
    #[error("{path}: {source}")]
    Fixture { path: String, source: Box<Error> },
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Prefix an error with the fixture path it arose at.
    pub fn at(self, path: impl Into<String>) -> Error {
        Error::Fixture { path: path.into(), source: Box::new(self) }
    }
}
