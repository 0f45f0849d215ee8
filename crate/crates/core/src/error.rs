use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("{routine} did not converge on a {rows}x{cols} input (frobenius norm {norm:e})")]
    NoConvergence {
        routine: &'static str,
        rows: usize,
        cols: usize,
        norm: f64,
    },

    #[error("matrix is not hermitian: max |h - h^dagger| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("quantum number m = {m} is outside [-{j}, {j}]")]
    QuantumNumberOutOfRange { m: f64, j: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unitarity drift at n = {step}: residual {residual:e} exceeds {limit:e}")]
    UnitarityDrift {
        step: usize,
        residual: f64,
        limit: f64,
    },

    #[error("quadrature did not converge: {coarse} vs {fine}")]
    Quadrature { coarse: f64, fine: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

impl Error {
    /// Short stable identifier, used for machine-readable reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::QuantumNumberOutOfRange { .. } => "quantum_number_out_of_range",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::UnitarityDrift { .. } => "unitarity_drift",
            Error::Quadrature { .. } => "quadrature",
            Error::EmptyInput(_) => "empty_input",
        }
    }
}
