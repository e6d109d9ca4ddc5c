use thiserror::Error;

#[derive(Debug, Error)]
pub enum PumError {
    #[error("invalid interval: lower {lower} must be below upper {upper}")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid control: {0}")]
    InvalidControl(String),

    #[error("unknown legislator: {0}")]
    UnknownLegislator(String),

    #[error("ambiguous legislator pattern {pattern:?} matches {matches:?}")]
    AmbiguousLegislator { pattern: String, matches: Vec<String> },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unmapped vote code {code} at row {row}, column {col}")]
    UnmappedCode { code: u8, row: usize, col: usize },

    #[error("not enough draws: {0}")]
    NotEnoughDraws(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = PumError> = std::result::Result<T, E>;
