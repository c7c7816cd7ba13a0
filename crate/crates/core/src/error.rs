use thiserror::Error;

/// Errors produced by state validation, the oracle and the dynamics engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("density matrix is not Hermitian: |rho[{row}][{col}] - conj(rho[{col}][{row}])| = {magnitude:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("density matrix trace is not one: |Tr - 1| = {deviation:e}")]
    TraceNotOne { deviation: f64 },

    #[error("density matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("density matrix is not X-structured: |rho[{row}][{col}]| = {magnitude:e} exceeds tolerance")]
    NotXStructured {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("invalid X state: {0}")]
    InvalidXState(String),

    #[error("matrix is not symmetric: max |U - U^T| = {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },

    #[error("oracle grid needs {evaluations} evaluations, above the 1e9 budget")]
    BudgetExceeded { evaluations: u128 },

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid q(t) model: {0}")]
    InvalidModel(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
