use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field F_{p}^{m} does not fit the packed element representation")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("valuation of an exact zero")]
    ZeroValuation,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("coefficient field F_{p}^{m} too small: {reason}")]
    DegreeTooSmall { p: u32, m: u32, reason: String },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("slope totals differ: {left} vs {right}")]
    SumMismatch { left: String, right: String },
    #[error("not a Newton point: {0}")]
    NotANewtonPoint(String),
    #[error("signature is not realizable: {0}")]
    Unrealizable(String),
    #[error("no witness found in {attempts} attempts")]
    SamplingExhausted { attempts: usize },
    #[error("part {index} has Hodge point {found}, expected (1,0)")]
    BadHodgeProfile { index: usize, found: String },
    #[error("invalid display parameters: {0}")]
    InvalidParams(String),
    #[error("out of range: {0}")]
    RangeError(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable name, used in JSON error documents and the C API.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NonPrime",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DivideByZero => "DivideByZero",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::ZeroValuation => "ZeroValuation",
            Error::NotInvertible => "NotInvertible",
            Error::DegreeTooSmall { .. } => "DegreeTooSmall",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::SumMismatch { .. } => "SumMismatch",
            Error::NotANewtonPoint(_) => "NotANewtonPoint",
            Error::Unrealizable(_) => "Unrealizable",
            Error::SamplingExhausted { .. } => "SamplingExhausted",
            Error::BadHodgeProfile { .. } => "BadHodgeProfile",
            Error::InvalidParams(_) => "InvalidParams",
            Error::RangeError(_) => "RangeError",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Internal(_) => "Internal",
        }
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
