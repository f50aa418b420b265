use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max imaginary part {0:e})")]
    NonHermitian(f64),

    #[error("operator does not match the two-qubit template: {0}")]
    TemplateMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A numerical guard tripped: aliasing, degenerate denominators, underflow.
    #[error("numerical guard: {0}")]
    NumericalGuard(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::NumericalGuard(msg.into())
    }
}
