use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("offset {0} is outside [0, 1)")]
    OffsetOutOfRange(String),
    #[error("offset mismatch: {0}")]
    OffsetMismatch(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("index {index} exceeds precision {precision}")]
    IndexAbovePrecision { index: i64, precision: i64 },
    #[error("exponent {0} is not congruent to the series offset")]
    ExponentNotOnLattice(String),
    #[error("float precision {0} is below the 64-bit minimum")]
    FloatPrecisionTooLow(u32),
    #[error("non-finite coefficient: {0}")]
    NonFinite(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("cusp flag is set but a constant-term coefficient is nonzero: {0}")]
    CuspFlagViolated(String),
    #[error("form is not cuspidal: {0}")]
    NotCuspidal(String),
    #[error("gamma pole at {0}")]
    GammaPole(String),
    #[error("bracket order must be at least 1")]
    ZeroOrder,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("missing tensor structure: {0}")]
    NotTensor(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
