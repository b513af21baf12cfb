use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} is too small (minimum {min})")]
    InvalidDimension { dim: usize, min: usize },

    #[error("eigendecomposition failed to converge")]
    EigenFailure,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("observable has a zero eigenvalue ({value:.3e}); the outcome sector is ambiguous")]
    ZeroEigenvalue { value: f64 },

    #[error("invalid projector pair: {0}")]
    InvalidProjectors(String),

    #[error("impossible branch: outcome has probability {probability:.3e}")]
    ImpossibleBranch { probability: f64 },

    #[error("sharpness {0} is outside (0, 1]")]
    InvalidSharpness(f64),

    #[error("observable is not traceless (trace {trace:.3e})")]
    NotTraceless { trace: f64 },

    #[error("invalid spin: two_j must be at least 1, got {0}")]
    InvalidSpin(u32),

    #[error("spin {two_j}/2 has no m = 0 sector")]
    NoZeroBeam { two_j: u32 },

    #[error("invalid angle schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("correlation {0} is outside [-1, 1]")]
    CorrelationOutOfRange(f64),

    #[error("record violates no-signalling in time by {deviation:.3e} ({location}); joint-distribution test is ill-posed")]
    NsitPrecondition { deviation: f64, location: String },

    #[error("linear program failed: {0}")]
    LinearProgram(String),
}
