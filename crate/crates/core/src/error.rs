use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("eigenvalue {eigenvalue:.6e} outside [0, 1] beyond tolerance {tol:.3e}")]
    SpectrumOutOfRange { eigenvalue: f64, tol: f64 },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("effect is trivial (O or I)")]
    TrivialEffect,

    #[error("effect is not invertible (min eigenvalue {min_eigenvalue:.3e})")]
    NotInvertible { min_eigenvalue: f64 },

    #[error("vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("effects sum to I only within {deviation:.3e} (tol {tol:.3e})")]
    NotNormalizedPovm { deviation: f64, tol: f64 },

    #[error("too many outcomes for exhaustive enumeration: {count} > {max}")]
    TooManyOutcomes { count: usize, max: usize },

    #[error("no state decides the effect at epsilon {epsilon}: norm is {norm:.12}")]
    NotDecidable { norm: f64, epsilon: f64 },

    #[error("state sequence does not concentrate on outcome {index} (step {step})")]
    SequenceNotConcentrating { index: usize, step: usize },

    #[error("Gram kernel is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    GramNotPsd { min_eigenvalue: f64 },

    #[error("quadrature failed to reach tolerance (estimated error {estimate:.3e})")]
    QuadratureFailure { estimate: f64 },

    #[error("truncation {d} too small for amplitude {amplitude} (need at least {required})")]
    TruncationTooSmall { d: usize, amplitude: f64, required: usize },

    #[error("depth {depth} is insufficient to resolve the norm (bracket [{lower}, {upper}])")]
    DepthInsufficient { depth: u32, lower: f64, upper: f64 },

    #[error("reference measure has zero total mass")]
    ZeroTotalMeasure,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenNonConvergence
                | Error::QuadratureFailure { .. }
                | Error::DepthInsufficient { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
