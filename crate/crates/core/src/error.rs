use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("non-finite entries encountered")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("eigenvector matrix is ill-conditioned (condition {condition:.3e}); treated as non-diagonalizable")]
    NonDiagonalizable { condition: f64 },

    #[error("eigenvalue {modulus:.3e} in modulus is numerically zero")]
    SingularEigenvalue { modulus: f64 },

    #[error("negative real eigenvalue {value:.6e}; no Hermiticity-preserving logarithm exists")]
    NegativeRealEigenvalue { value: f64 },

    #[error("complex eigenvalue {index} has no conjugate partner")]
    UnmatchedPair { index: usize },

    #[error("negative jump rate {0}")]
    NegativeRate(f64),

    #[error("superoperator is not Hermiticity-preserving (residual {residual:.3e})")]
    NotHermiticityPreserving { residual: f64 },

    #[error("superoperator is not trace-preserving (residual {residual:.3e})")]
    NotTracePreserving { residual: f64 },

    #[error("invalid step count: {n_steps} steps is not a positive multiple of {n_t} samples")]
    StepCountInvalid { n_steps: usize, n_t: usize },

    #[error("{what}: {value:.3e} exceeds tolerance {tol:.1e}")]
    ToleranceNotMet { what: &'static str, value: f64, tol: f64 },

    #[error("mixing weight {0} outside [0, 1]")]
    LambdaOutOfRange(f64),

    #[error("eta {0} outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("branch index {value} exceeds cap {cap}")]
    CapExceeded { value: i64, cap: i64 },

    #[error("dynamical map not invertible at sample {sample} (smallest singular value {sigma_min:.3e})")]
    NotInvertible { sample: usize, sigma_min: f64 },

    #[error("branch set cardinality {cardinality} exceeds budget {budget}")]
    CardinalityOverflow { cardinality: Cardinality, budget: u128 },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("grid index ({i}, {j}) outside {n1}x{n2} grid")]
    IndexOutOfRange { i: usize, j: usize, n1: usize, n2: usize },

    #[error("linear algebra backend: {0}")]
    Backend(#[from] ndarray_linalg::error::LinalgError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Size of a branch set, kept exact as `base^exponent` when it no longer
/// fits in 128 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Exact(u128),
    Power { base: u64, exponent: u64 },
}

impl Cardinality {
    pub fn power(base: u64, exponent: u64) -> Self {
        u32::try_from(exponent)
            .ok()
            .and_then(|e| (base as u128).checked_pow(e))
            .map(Cardinality::Exact)
            .unwrap_or(Cardinality::Power { base, exponent })
    }

    pub fn exact(&self) -> Option<u128> {
        match self {
            Cardinality::Exact(n) => Some(*n),
            Cardinality::Power { .. } => None,
        }
    }

    /// Approximate magnitude, used for logging and plotting.
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cardinality::Exact(n) => n as f64,
            Cardinality::Power { base, exponent } => (base as f64).powf(exponent as f64),
        }
    }
}

impl std::fmt::Display for Cardinality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cardinality::Exact(n) => write!(f, "{n}"),
            Cardinality::Power { base, exponent } => write!(f, "{base}^{exponent}"),
        }
    }
}
