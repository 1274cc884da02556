use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a nonzero element of K")]
    ZeroElement,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("point lies on the divisor of polynomial #{index}")]
    PointOnDivisor { index: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("not a valid place: {0}")]
    InvalidPlace(String),
    #[error("invalid projective point: {0}")]
    InvalidPoint(String),
    #[error("no Nullstellensatz certificate with exponent at most {cap}")]
    NoCertificateWithinCap { cap: u32 },
    #[error("span points are linearly dependent")]
    DependentSpan,
    #[error("point lies in the base locus of the monomial map")]
    BaseLocusPoint,
    #[error("the divisor lies in the ideal")]
    DivisorInIdeal,
    #[error("missing Hilbert table entry at degree {0}")]
    MissingTableEntry(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
