//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, validators and quadrature-backed
/// operations. Numerical *reports* (defect figures) are not errors; only
/// violated preconditions and rejected inputs are.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite input: {context}")]
    NonFinite { context: &'static str },

    #[error("{context}: {value} is not a valid value")]
    InvalidValue { context: &'static str, value: f64 },

    #[error("quadrature bounding box does not cover the region ({context})")]
    BoundingBoxCoverage { context: &'static str },

    #[error("quadrature needs at least 2 nodes per axis, got {got}")]
    TooFewNodes { got: usize },

    #[error("operator is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    HermiticityDefect { defect: f64, tol: f64 },

    #[error("trace defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    TraceDefect { defect: f64, tol: f64 },

    #[error("negative eigenvalue {eigenvalue:.3e} below -{tol:.3e}")]
    NegativeEigenvalue { eigenvalue: f64, tol: f64 },

    #[error(
        "dilation {requested} is not a grid-compatible power of the grid ratio; \
         nearest compatible dilation is {nearest}"
    )]
    IncompatibleDilation { requested: f64, nearest: f64 },

    #[error("support loss {lost:.3e} exceeds the allowed threshold {allowed:.3e}")]
    SupportLoss { lost: f64, allowed: f64 },

    #[error(
        "modulation window reaches |b| = {b_max} but the grid resolves only \
         |b| <= {bound:.6} over the supports involved"
    )]
    ModulationBound { b_max: f64, bound: f64 },

    #[error("mixture weights must sum to 1 within {tol:.1e}, defect {defect:.3e}")]
    MixtureWeights { defect: f64, tol: f64 },

    #[error("mixture vectors must be orthonormal within {tol:.1e}, defect {defect:.3e}")]
    MixtureOrthonormality { defect: f64, tol: f64 },

    #[error("sampled functions live on different half-line grids")]
    GridMismatch,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("empty input: {context}")]
    EmptyInput { context: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
