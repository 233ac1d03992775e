use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system:\n{0}")]
    Invalid(ValidationReport),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("non-contiguous steps in track {track}: expected step {expected}, found {found}")]
    NonContiguousSteps { track: String, expected: i64, found: i64 },
    #[error("tracks have different lengths: {0}")]
    MixedTrackLengths(String),
    #[error("empty time window [{a}, {b}]")]
    EmptyWindow { a: i64, b: i64 },
    #[error("no orbit of the base map survives to the final time")]
    NoSurvivingOrbit,
    #[error("{0}")]
    Precondition(String),
    #[error("k-means: {0}")]
    Clustering(String),
    #[error("brute-force oracle refuses {states} states (bound {bound})")]
    TooLarge { states: usize, bound: usize },
    #[error("state {0} has no coordinates")]
    MissingCoordinates(usize),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
