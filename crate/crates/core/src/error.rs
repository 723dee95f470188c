use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has dimension zero")]
    Empty,

    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("trace {trace} differs from 1")]
    TraceNotOne { trace: f64 },

    #[error("state is not faithful: eigenvalue {eigenvalue:e} at index {index} is below the support threshold")]
    NotFaithful { eigenvalue: f64, index: usize },

    #[error("operators do not commute: ||[a, b]||_F = {defect:e}")]
    NonCommuting { defect: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("measure is not absolutely continuous: atom `{atom}` is null for the reference but charged")]
    AbsoluteContinuity { atom: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
