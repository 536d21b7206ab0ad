use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("matrix is not Hermitian: entry ({row}, {col}) has no matching conjugate")]
    NotHermitian { row: usize, col: usize },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not positive definite (eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eigen index {index} out of range for dimension {dim}")]
    NotEigenIndex { index: usize, dim: usize },
    #[error("invalid sample count {0}")]
    InvalidN(usize),
    #[error("zero phase-estimation outcome at sample {index}: log undefined (pointer register too small)")]
    ZeroOutcome { index: usize },
    #[error("cannot evaluate spectral function at {x:e}: {msg}")]
    Eval { x: f64, msg: String },
    #[error("at least {need} samples required, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("outside the valid regime: {0}")]
    Regime(String),
    #[error("gamma must be positive, got {0}")]
    InvalidGamma(f64),
    #[error("derivative unbounded on [{lo}, {hi}]")]
    UnboundedDerivative { lo: f64, hi: f64 },
    #[error("restarts exhausted after {restarts} restarts (last m = {m})")]
    RestartsExhausted { restarts: usize, m: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name, used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::Dimension(_) => "DimensionError",
            Error::NotPositive(_) => "NotPositive",
            Error::BoundViolation(_) => "BoundViolation",
            Error::TooLarge(_) => "TooLarge",
            Error::Domain(_) => "DomainError",
            Error::NotEigenIndex { .. } => "NotEigenIndex",
            Error::InvalidN(_) => "InvalidN",
            Error::ZeroOutcome { .. } => "ZeroOutcome",
            Error::Eval { .. } => "EvalError",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::Regime(_) => "RegimeError",
            Error::InvalidGamma(_) => "InvalidGamma",
            Error::UnboundedDerivative { .. } => "UnboundedDerivative",
            Error::RestartsExhausted { .. } => "RestartsExhausted",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Io(_) => "IoError",
        }
    }

    /// Process exit code: 2 validation, 3 regime, 4 estimation abort.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Regime(_) | Error::UnboundedDerivative { .. } => 3,
            Error::ZeroOutcome { .. } | Error::Eval { .. } | Error::RestartsExhausted { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
