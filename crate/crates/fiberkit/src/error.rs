use thiserror::Error;

/// Errors produced by fiberkit operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("measure space has no atoms of positive weight")]
    DegenerateSpace,
    #[error("determining set violates the Parseval contract: {0}")]
    ContractViolation(String),
    #[error(
        "operator is not multiplication invariant: worst atom pair ({row}, {col}) has commutator residual {residual:.3e}"
    )]
    NotMultiplicationInvariant {
        row: usize,
        col: usize,
        residual: f64,
    },
    #[error("operator does not map the domain space into the codomain space: atom {atom} leaks {residual:.3e}")]
    RangeLeak { atom: usize, residual: f64 },
    #[error("fiber at atom {atom} is not invertible (sigma_min = {sigma_min:.3e})")]
    NonInvertible { atom: usize, sigma_min: f64 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("spectral mode requires a normal range operator: {0}")]
    ModeNotApplicable(String),
    #[error("block at atom {atom} is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { atom: usize, eigenvalue: f64 },
    #[error("Gramian rank {rank} at atom {atom} exceeds the ambient dimension {dim}")]
    DimensionDeficit { atom: usize, rank: usize, dim: usize },
    #[error("system is not a frame: {0}")]
    NotAFrame(String),
    #[error(
        "operator is not translation invariant: worst group element {element} has commutator residual {residual:.3e}"
    )]
    NotTranslationInvariant { element: usize, residual: f64 },
    #[error("numerical factorization failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
