//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building or transforming operators.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands (or a layout) carry the same subsystem label.
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    /// A requested label does not exist in the layout.
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    /// Partition blocks overlap or do not cover the layout.
    #[error("parts must be disjoint and cover the layout: {0}")]
    OverlappingParts(String),

    /// A matrix failed the hermiticity check.
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// A would-be density operator has an eigenvalue below the clamp window.
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// A would-be density operator does not have unit trace.
    #[error("trace is {trace:.12} but must be 1")]
    TraceNotOne { trace: f64 },

    /// A state vector is not normalized.
    #[error("squared norm is {norm_sq:.12} but must be 1")]
    NotNormalized { norm_sq: f64 },

    /// A spectral function was applied outside its domain.
    #[error("matrix function undefined on spectrum: {0}")]
    DomainError(String),

    /// A scalar parameter fell outside its allowed range.
    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    RangeError {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Requested rank is impossible for the layout dimension.
    #[error("rank {rank} not in 1..={dim}")]
    RankError { rank: usize, dim: usize },

    /// Wrong number of parties or terms.
    #[error("bad arity: {0}")]
    BadArity(String),

    /// Operators that must share a layout do not.
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    /// A measurement model violates its invariants.
    #[error("invalid measurement model: {0}")]
    InvalidModel(String),

    /// A chain operation needs at least one attached ancilla.
    #[error("chain has no ancilla")]
    NoAncilla,

    /// A probability vector is not a distribution.
    #[error("not a probability distribution: {0}")]
    InvalidDistribution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
