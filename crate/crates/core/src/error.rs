use thiserror::Error;

use crate::poly::Polynomial;

/// Every failure the library can report.
///
/// Variants that carry a certificate (`NotCr`, `NonExtendable`, `Mismatch`)
/// hold enough data for a caller to reproduce the failed check.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial contains the variable w")]
    ContainsW,

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("substitution is not conjugate-consistent at variable {index}")]
    InconsistentConjugation { index: usize },

    #[error("the Hermitian form A is degenerate")]
    Degenerate,

    #[error("unsupported dimension n = {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: &'static str },

    #[error("slice direction c must be nonzero")]
    ZeroDirection,

    #[error("degenerate slice: both quadratic coefficients vanish")]
    DegenerateSlice,

    #[error("{}", not_cr_message(*.degree, *.field, .certificate))]
    NotCr {
        /// Homogeneous degree at which the failure was detected, when the
        /// check ran degree by degree.
        degree: Option<u32>,
        /// Index pair (j, k), 1-based, of the CR field that does not annihilate f.
        field: (usize, usize),
        certificate: Polynomial,
    },

    #[error("linear system for weighted degree {degree} is inconsistent")]
    NoSolution { degree: u32 },

    #[error("not extendable through w = z zbar: nonzero coefficients at (k, j) = {pairs:?}")]
    NonExtendable { pairs: Vec<(u32, u32)> },

    #[error("input supplied only through degree {supplied}, order {requested} requested")]
    TruncationTooShort { supplied: u32, requested: u32 },

    #[error("super/sub-diagonal entry {index} is zero")]
    ZeroEntry { index: usize },

    #[error("slice consistency mismatch: difference {difference}")]
    Mismatch { difference: Polynomial },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("perturbation is not O(3): term {term} has degree {degree}")]
    NotO3 { term: String, degree: u32 },
}

fn not_cr_message(degree: Option<u32>, field: (usize, usize), cert: &Polynomial) -> String {
    match degree {
        Some(d) => format!(
            "not CR at degree {d}: L_{{{},{}}} f = {cert}",
            field.0, field.1
        ),
        None => format!("not CR: L_{{{},{}}} f = {cert}", field.0, field.1),
    }
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Short stable identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ContainsW => "ContainsW",
            Error::MalformedInput(_) => "MalformedInput",
            Error::InconsistentConjugation { .. } => "InconsistentConjugation",
            Error::Degenerate => "Degenerate",
            Error::UnsupportedDimension { .. } => "UnsupportedDimension",
            Error::ZeroDirection => "ZeroDirection",
            Error::DegenerateSlice => "DegenerateSlice",
            Error::NotCr { .. } => "NotCR",
            Error::NoSolution { .. } => "NoSolution",
            Error::NonExtendable { .. } => "NonExtendable",
            Error::TruncationTooShort { .. } => "TruncationTooShort",
            Error::ZeroEntry { .. } => "ZeroEntry",
            Error::Mismatch { .. } => "Mismatch",
            Error::Parse { .. } => "ParseError",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::NotO3 { .. } => "NotO3",
        }
    }
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 3,
            Error::InvariantViolation(_) | Error::NotO3 { .. } => 4,
            Error::Degenerate => 5,
            Error::NotCr { .. } => 10,
            Error::NonExtendable { .. } => 11,
            Error::NoSolution { .. } => 12,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
