use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An estimator had nothing to count (no clusters, no exceedances, empty denominator).
    #[error("no data: {0}")]
    NoData(String),

    #[error("degenerate bootstrap: {discarded} of {total} replicates had a non-positive denominator")]
    DegenerateBootstrap { discarded: usize, total: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn no_data(msg: impl Into<String>) -> Self {
        Error::NoData(msg.into())
    }
}
