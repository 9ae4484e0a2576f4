use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query exceeds the range covered by a prime table.
    #[error("{what} = {value} exceeds the table limit {limit}; re-sieve with a larger limit")]
    OutOfRange { what: &'static str, value: f64, limit: u64 },

    /// A requested size exceeds a configured hard cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An iterative evaluation did not reach its target accuracy.
    #[error("accuracy not reached after {terms} terms (partial value {partial})")]
    Accuracy { terms: usize, partial: String },

    /// A root bracket does not enclose a sign change.
    #[error("bracketing failure: f({lo}) = {f_lo} and f({hi}) = {f_hi} do not change sign")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Malformed cache or data file.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
