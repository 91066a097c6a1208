use thiserror::Error;

/// Errors raised by the qdyn library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QdynError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem dimensions {dims:?} do not multiply to {total}")]
    InvalidDims { dims: Vec<usize>, total: usize },

    #[error("label {label} out of range for subsystem {index} of dimension {dim}")]
    LabelOutOfRange { index: usize, label: usize, dim: usize },

    #[error("dimension must be at least {min}, got {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("probabilities are invalid: {0}")]
    InvalidProbabilities(String),

    #[error("completeness violated: max |sum M^dag M - I| = {deviation:e}")]
    Incomplete { deviation: f64 },

    #[error("outcome {outcome} has probability {probability:e}, below the collapse floor")]
    ZeroProbabilityOutcome { outcome: usize, probability: f64 },

    #[error("outcome index {outcome} out of range for {count} outcomes")]
    OutcomeOutOfRange { outcome: usize, count: usize },

    #[error("negative variance {0:e}")]
    NegativeVariance(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular linear system in integrator step at t = {t}")]
    SingularSystem { t: f64 },

    #[error("positivity lost at t = {t}: min eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { t: f64, min_eigenvalue: f64 },

    #[error("only bipartite systems are supported, got {0} subsystems")]
    NotBipartite(usize),
}

pub type Result<T> = std::result::Result<T, QdynError>;
