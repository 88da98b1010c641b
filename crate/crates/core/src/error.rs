use thiserror::Error;

use crate::scalar::ScalarMode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point cloud has no records")]
    EmptyCloud,

    #[error("record multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("flat dimension {r} out of range for ambient dimension {d}")]
    FlatDimOutOfRange { r: usize, d: usize },

    #[error("basis is rank deficient")]
    RankDeficient,

    #[error("matrix columns are not orthonormal")]
    NotOrthonormal,

    #[error("flat offset is not orthogonal to its basis")]
    NotCanonical,

    #[error("flat list is empty")]
    EmptyFlatList,

    #[error("points are affinely dependent")]
    AffinelyDependent,

    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: ScalarMode, found: ScalarMode },

    #[error("cluster count k must be at least 1")]
    InvalidK,

    #[error("instance too large for exact mode: {what} needs {count} steps, cap is {cap}")]
    TooLarge { what: &'static str, count: String, cap: String },

    #[error("hyperplane has all-zero normal")]
    DegenerateHyperplane,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("vertex set is not dominating")]
    NotDominating,

    #[error("hyperplanes do not cover every point")]
    NotACover,

    #[error("reduction integrity failure: {0}")]
    Integrity(String),

    #[error("line is not axis-aligned")]
    NotAxisAligned,

    #[error("selection out of range: {0}")]
    Selection(String),

    #[error("operation requires dimension 2, got {0}")]
    NotPlanar(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn too_large(what: &'static str, count: impl ToString, cap: impl ToString) -> Self {
        Error::TooLarge { what, count: count.to_string(), cap: cap.to_string() }
    }

    /// True for resource-guard trips (enumeration or candidate caps).
    pub fn is_guard_trip(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
