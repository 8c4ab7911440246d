use std::path::PathBuf;

use thiserror::Error;

use crate::htdist::DistKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{param} = {value} is outside {domain}")]
    Domain {
        param: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("no closed-form tail for {0:?} with these parameters")]
    UnsupportedTail(DistKind),

    #[error("tail grid must be positive and strictly increasing")]
    InvalidGrid,

    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown benchmark function `{0}`")]
    UnknownProblem(String),

    #[error("unknown variant `{0}` (expected cs, csml, csp, csc or csw)")]
    UnknownVariant(String),

    #[error("malformed data file {}: {reason}", path.display())]
    DataFile { path: PathBuf, reason: String },

    #[error("data in {} supports dimension {available}, requested {requested}", path.display())]
    UnsupportedDimension {
        path: PathBuf,
        available: usize,
        requested: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("simulation diverged at step {step}")]
    SimulationDiverged { step: usize },

    #[error("degenerate result matrix: {0}")]
    DegenerateMatrix(String),

    #[error("paired samples differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("`{0}` is not present in the result matrix")]
    MissingAlgorithm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
