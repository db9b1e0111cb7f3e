use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("negative exponent on non-Laurent variable `{0}`")]
    NegativeExponent(String),

    #[error("exp requires a series with zero constant term")]
    NonzeroConstantTerm,

    #[error("log requires a series with constant term 1")]
    ConstantTermNotOne,

    #[error("coefficient {requested} requested beyond truncation order {order}")]
    PrecisionExceeded { requested: usize, order: usize },

    #[error("series mismatch: {0}")]
    SeriesMismatch(String),

    #[error("interpolation needs {needed} samples at distinct nodes, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("polynomiality violation at j = {j}: sample disagrees with degree-{degree_bound} interpolant")]
    PolynomialityViolation { j: i64, degree_bound: usize },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
