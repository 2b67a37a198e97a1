use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad parameters or configuration.
    Validation,
    /// Unreadable or malformed input data.
    Data,
    /// The numbers themselves are degenerate (zero variance, empty segments, ...).
    Numerical,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported wavelet {family} with order {order}")]
    UnsupportedWavelet { family: &'static str, order: usize },

    #[error("too many levels: {levels} requested for a signal of length {length}")]
    TooManyLevels { levels: usize, length: usize },

    #[error("scale {scale} too large for a signal of length {length}")]
    ScaleTooLarge { scale: usize, length: usize },

    #[error("zero standard deviation: {0}")]
    ZeroSigma(&'static str),

    #[error("degenerate segments at scale {scale}: {message}")]
    DegenerateSegments { scale: usize, message: String },

    #[error("only {found} usable scales, at least {required} required")]
    TooFewScales { found: usize, required: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("no local maxima in marginal")]
    NoLocalMaxima,

    #[error("covariance embedding is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    EmbeddingFailure { min_eigenvalue: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } | Error::Csv(_) | Error::Row { .. } | Error::InvalidSeries(_) => {
                ErrorKind::Data
            }
            Error::InvalidParameter(_)
            | Error::UnsupportedWavelet { .. }
            | Error::TooManyLevels { .. }
            | Error::ScaleTooLarge { .. } => ErrorKind::Validation,
            Error::ZeroSigma(_)
            | Error::DegenerateSegments { .. }
            | Error::TooFewScales { .. }
            | Error::NonFinite(_)
            | Error::NoLocalMaxima
            | Error::EmbeddingFailure { .. } => ErrorKind::Numerical,
        }
    }
}
