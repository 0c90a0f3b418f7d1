use thiserror::Error;

pub type Result<T, E = ScalingError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("empty input")]
    Empty,

    #[error("non-positive close {value} at position {position}")]
    NonPositivePrice { position: usize, value: f64 },

    #[error("non-finite value at position {position}")]
    NonFinite { position: usize },

    #[error("dates not strictly increasing at position {position}")]
    DatesNotIncreasing { position: usize },

    #[error("duplicate date {date} at position {position}")]
    DuplicateDate { position: usize, date: String },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid scale grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("not enough points for fit: need {needed}, have {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
