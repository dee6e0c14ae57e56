use thiserror::Error;

use crate::state::ValidationReport;

/// Errors raised by the simulator and the analysis layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid qubit count {0}")]
    InvalidQubitCount(usize),

    #[error("state is not normalized (|norm^2 - 1| = {deviation:e})")]
    NotNormalized { deviation: f64 },

    #[error("noise parameter alpha = {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("Kraus operators violate completeness (max |sum E^dagger E - I| = {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("Kraus set is empty")]
    EmptyKraus,

    #[error("expanding local Kraus operators to {qubits} qubits exceeds the limit of {limit}")]
    ExpansionLimit { qubits: usize, limit: usize },

    #[error("density matrix validation failed {context}: {report}")]
    InvalidDensity {
        context: String,
        report: ValidationReport,
    },

    #[error("confidence {0} must lie strictly between 0 and 1")]
    InvalidConfidence(f64),

    #[error("rerun budget is zero for N = {size}; quantum search is never competitive")]
    NeverCompetitive { size: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
