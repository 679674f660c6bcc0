use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `(n, beta)` is not covered by any of the native-norm estimates.
    #[error("unsupported case: n = {n}, beta = {beta}: {reason}")]
    Unsupported { n: usize, beta: f64, reason: String },

    /// The centers cannot determine the polynomial part of the interpolant.
    #[error("unisolvency error: node degree {degree} is below m - 1 = {required}")]
    Unisolvent { degree: usize, required: usize },

    /// The interpolation system is numerically singular for this shape parameter.
    #[error(
        "conditioning error at c = {c}: pivot {pivot:e} below threshold {threshold:e} (row {row})"
    )]
    Conditioning {
        c: f64,
        pivot: f64,
        threshold: f64,
        row: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
