//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point cloud must contain at least one point")]
    EmptyCloud,

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid convex combination: {0}")]
    InvalidCombination(String),

    #[error("query point lies outside the convex hull (feasibility residual {residual:e})")]
    Membership { residual: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("simplex did not terminate within {iterations} pivots")]
    NonTermination { iterations: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no nonvertical supporting hyperplane at boundary point {point:?} under the given gradient bound")]
    VerticalHyperplane { point: Vec<f64> },

    #[error("point is not on the hull boundary: {0}")]
    NotOnBoundary(String),

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("resolution {got} below the minimum {min} for example `{name}`")]
    ResolutionTooLow { name: String, got: usize, min: usize },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("matrix is not an isometry: ‖V†V − I‖∞ = {deviation:e}")]
    InvalidIsometry { deviation: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
