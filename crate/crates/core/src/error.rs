use thiserror::Error;

/// Why a certification attempt did not produce a verified certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertFailure {
    /// The midpoint secant matrix is numerically rank deficient.
    Rank,
    /// No tested epsilon satisfied the inequality.
    Infeasible,
    /// The starting point violates `‖x0‖_∞ < 1`.
    OutOfBox,
}

impl std::fmt::Display for CertFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertFailure::Rank => write!(f, "rank"),
            CertFailure::Infeasible => write!(f, "infeasible"),
            CertFailure::OutOfBox => write!(f, "out-of-box"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("rank deficient (smallest singular value estimate {smallest:e})")]
    RankDeficient { smallest: f64 },
    #[error("not equiangular: {0}")]
    NotEquiangular(String),
    #[error("not a valid signature: {0}")]
    NotAValidSignature(String),
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("certification failed ({reason}); best lhs-rhs gap {gap:e}")]
    CertificationFailed { reason: CertFailure, gap: f64 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
