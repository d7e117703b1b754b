use thiserror::Error;

/// Failures reported by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not hermitian (max asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NonHermitianInput { asymmetry: f64, allowed: f64 },
    #[error("operator is not unitary (max |M^H M - I| = {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {found} is below the minimum {min}")]
    DimensionTooSmall { found: usize, min: usize },
    #[error("theta must be nonzero")]
    ZeroTheta,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("U V and V U are not proportional (residual {residual:e})")]
    NotProportional { residual: f64 },
    #[error("expected {expected} couplings for this chain, found {found}")]
    BadCouplingCount { expected: usize, found: usize },
    #[error("couplings are not uniform")]
    NonUniformCouplings,
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("register of {qubits} qubits exceeds the cap of {cap}")]
    RegisterTooLarge { qubits: usize, cap: usize },
    #[error("2^{0} does not fit in a signed 64-bit integer")]
    Overflow(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
