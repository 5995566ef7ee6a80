use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} has zero variance; correlation distance is undefined")]
    ZeroVarianceRow { row: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("complex is not closed under inclusion: face {face:?} of {simplex:?} is missing")]
    NotClosedUnderInclusion { simplex: Vec<usize>, face: Vec<usize> },

    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),

    #[error("malformed complex document: {0}")]
    MalformedDocument(String),

    #[error("complex has no simplices at dimension {q}")]
    NoSimplicesAtDimension { q: usize },

    #[error("complex weights have not been computed")]
    MissingWeights,

    #[error("feature is constant after centering (weighted variance {variance:e})")]
    ZeroVarianceFeature { variance: f64 },

    #[error("eigensolver did not converge; worst residuals {residuals:?}")]
    ConvergenceFailure { residuals: Vec<f64> },

    #[error("invalid p-value {value} at position {index}; p-values must lie in (0, 1]")]
    InvalidPValue { index: usize, value: f64 },

    #[error("q-point feature has no value for tuple {0:?}")]
    MissingTupleValue(Vec<usize>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
