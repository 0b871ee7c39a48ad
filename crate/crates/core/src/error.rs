use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "tied values detected ({value} appears more than once); rerun with random tie breaking"
    )]
    TiesDetected { value: f64 },

    #[error("non-finite input value")]
    NonFiniteInput,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {min} values, got {got}")]
    TooFewValues { min: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid sample set: {0}")]
    InvalidSampleSet(String),

    #[error("permutation count must be at least 1")]
    InvalidK,

    #[error("null distribution is empty")]
    EmptyNull,

    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("outlier injection requires real-valued Y")]
    ComplexYUnsupported,

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("non-numeric cell `{value}` at row {row}, column `{column}`")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("complex column `{0}` has no matching partner")]
    UnpairedComplexColumn(String),

    #[error("file contains no data rows")]
    EmptyFile,

    #[error("line {line}: expected 2 columns, found {found}")]
    ColumnCountMismatch { line: usize, found: usize },

    #[error("column sets for X and Y overlap on `{0}`")]
    OverlappingColumns(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
