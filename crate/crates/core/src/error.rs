use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: alpha = {alpha}, theta = {theta} (need 0 <= alpha < 1 and theta > -alpha)")]
    InvalidParams { alpha: f64, theta: f64 },

    #[error("empty partition")]
    EmptyPartition,

    #[error("invalid frequency counts: {0}")]
    InvalidCounts(String),

    #[error("{what} is limited to n <= {limit}, got {n}")]
    TooLarge {
        what: &'static str,
        n: u64,
        limit: u64,
    },

    #[error("series did not converge: error bound {bound:e} exceeds tolerance {tol:e} after {terms} terms")]
    NonConvergence { bound: f64, tol: f64, terms: usize },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("simulation budget exceeded: {requested} draws requested, limit {limit}")]
    Budget { requested: u128, limit: u128 },

    #[error("precision failure: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
