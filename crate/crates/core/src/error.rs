//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while calibrating, fitting, or doing I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("overlap level must lie in [0, 1), got {0}")]
    OverlapOutOfRange(f64),

    #[error("exponent m must be at least 1, got {0}")]
    ExponentOutOfRange(f64),

    #[error("interval length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("gamma must lie in [0, 1], got {0}")]
    GammaOutOfRange(f64),

    #[error("matrix dimensions {rows}x{cols} do not match buffer length {len}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("cluster count k={k} exceeds number of points N={points}")]
    TooManyClusters { k: usize, points: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cluster {0} has no members; its mean is undefined")]
    EmptyCluster(usize),

    #[error("assignment references cluster {index}, but k={k}")]
    ClusterIndexOutOfRange { index: usize, k: usize },

    #[error("dataset must contain at least one point with at least one feature")]
    EmptyDataset,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("expected {points} row labels, got {labels}")]
    LabelCountMismatch { labels: usize, points: usize },

    #[error("duplicate row label {0:?}")]
    DuplicateLabel(String),

    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("cell at row {row}, column {col} is not a finite number: {value:?}")]
    InvalidCell {
        row: usize,
        col: usize,
        value: String,
    },

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("a label column requires a header row")]
    LabelRequiresHeader,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
