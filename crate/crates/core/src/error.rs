//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical engines, special functions and kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An engine ran out of budget with its error estimate above tolerance.
    /// The best available value is carried along so callers can still report it.
    #[error("{context}: no convergence (value {value}, error estimate {error_estimate:e}, work {work})")]
    NonConvergence {
        context: String,
        value: Complex64,
        error_estimate: f64,
        work: usize,
    },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("oscillatory tail does not decay over the last {window} half-periods")]
    DivergentTail { window: usize },

    #[error("Abel radii schedule is empty")]
    EmptyRadiiSchedule,

    #[error("sequence of length {len} is too short (need at least 3)")]
    SequenceTooShort { len: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("Laguerre order α = {alpha} must exceed −1")]
    InvalidOrder { alpha: f64 },

    #[error("₁F₁ lower parameter {c} is a non-positive integer")]
    PoleAtC { c: Complex64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("argument {0} is a pole")]
    PoleError(Complex64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ζ = {zeta} lies on the spectrum {{0, 1, 2, …}}")]
    SpectrumPole { zeta: Complex64 },

    #[error("evaluation at the origin of the homogeneous norm")]
    OriginSingularity,

    #[error("grid with {points} points per axis is too small (need ≥ 8)")]
    GridTooSmall { points: usize },

    #[error("shift λ = {lambda} is numerically on the spectrum (pivot {pivot:e}); retry with λ + {suggested_nudge:e}")]
    SingularShift {
        lambda: f64,
        pivot: f64,
        suggested_nudge: f64,
    },
}

impl Error {
    pub(crate) fn non_convergence(
        context: impl Into<String>,
        value: impl Into<Complex64>,
        error_estimate: f64,
        work: usize,
    ) -> Self {
        Error::NonConvergence {
            context: context.into(),
            value: value.into(),
            error_estimate,
            work,
        }
    }

    /// Prefix the context of a `NonConvergence` error; other variants pass through.
    pub fn in_context(self, outer: &str) -> Self {
        match self {
            Error::NonConvergence {
                context,
                value,
                error_estimate,
                work,
            } => Error::NonConvergence {
                context: format!("{outer}: {context}"),
                value,
                error_estimate,
                work,
            },
            other => other,
        }
    }

    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
