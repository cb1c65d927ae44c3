use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar input was NaN or infinite.
    #[error("value out of domain: {0} is not finite")]
    Domain(f64),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Input data without enough variance to carry out the operation.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "degenerate input: covariance eigenvalue #{index} is {value:e}, below {threshold:e} \
         (relative to the largest eigenvalue)"
    )]
    RankDeficient {
        index: usize,
        value: f64,
        threshold: f64,
    },

    #[error("degenerate projection: residual norm {residual:e} after deflation")]
    DegenerateProjection { residual: f64 },

    #[error("failed to extract component {component}: {reason}")]
    ExtractionFailed { component: usize, reason: String },

    #[error("could not generate a mixing matrix: {0}")]
    Generation(String),

    #[error("unsupported format: {field}: {detail}")]
    UnsupportedFormat { field: &'static str, detail: String },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
