use thiserror::Error;

/// Errors surfaced by the simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sign change over bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("infeasible problem: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
