use thiserror::Error;

/// Errors produced by the numeric kernel, the spectrum tools and the bound evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence (best estimate {estimate:e}, error estimate {error:e})")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("quadrature did not converge for {term} (estimate {estimate:e}, error {error:e})")]
    Quadrature { term: String, estimate: f64, error: f64 },

    #[error("root not bracketed: f({lo}) = {flo:e}, f({hi}) = {fhi:e}")]
    Bracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("enumeration cap exceeded: k = {k} > {cap}")]
    CapExceeded { k: usize, cap: usize },

    #[error("generator matrix is rank deficient: rank {rank} < k = {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
