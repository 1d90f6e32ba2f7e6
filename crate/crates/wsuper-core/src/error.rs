//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by constructions and verifications in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// Two scalars from incompatible fields were combined.
    #[error("incompatible scalar fields: {0}")]
    FieldMismatch(String),
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// Vector or matrix sizes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The element supplied as a nilpotent is not nilpotent.
    #[error("element is not ad-nilpotent")]
    NotNilpotent,
    /// A linear system that was expected to be solvable has no solution.
    #[error("no solution: {0}")]
    NoSolution(String),
    /// A bilinear form is degenerate where non-degeneracy is required.
    #[error("degenerate form: {0}")]
    Degenerate(String),
    /// The computation needs a square root that is not available in the working field.
    #[error("quadratic extension required: {0}")]
    NeedsExtension(String),
    /// The Kazhdan degree cap is too small for the requested computation.
    #[error("degree cap {given} too small; at least {needed} required")]
    DegreeCap { needed: i64, given: i64 },
    /// Input outside the supported range of a routine.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The prime fails an admissibility condition.
    #[error("inadmissible prime {p}: {reason}")]
    Inadmissible { p: u64, reason: String },
    /// A brute-force search would exceed its hard limit.
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
