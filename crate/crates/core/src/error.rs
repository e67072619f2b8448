use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sector exceeds capacity of {cap} states (reached {reached})")]
    Capacity { cap: usize, reached: usize },

    #[error("atom count mismatch: expected {expected}, got {got}")]
    AtomCountMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dark state undefined: all coupling products vanish")]
    UndefinedDarkState,

    #[error("dark space has dimension {dimension}, expected exactly one")]
    AmbiguousDarkSpace { dimension: usize },

    #[error(
        "norm drift {drift:.3e} at t = {t:.4} exceeds {limit:.1e}; increase the step count"
    )]
    IntegrationFailure { drift: f64, t: f64, limit: f64 },

    #[error("outcome probability {probability:.3e} is below the detection floor")]
    ImpossibleOutcome { probability: f64 },

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("measurement basis is not orthonormal and complete: {0}")]
    InvalidBasis(String),

    #[error("invalid subsystem specification: {0}")]
    InvalidSubsystem(String),

    #[error("non-physical density matrix: {0}")]
    NonPhysical(String),
}
