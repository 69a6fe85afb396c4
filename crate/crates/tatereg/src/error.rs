use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime >= 5")]
    BadPrime(u64),
    #[error("p^M = {p}^{m} does not fit the native 62-bit residue representation")]
    ModulusTooLarge { p: u64, m: u32 },
    #[error("operands live over different coefficient rings")]
    RingMismatch,
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("no root in the residue field{}", .minimal_degree.map(|d| format!(" (smallest residue degree with a root: {d})")).unwrap_or_default())]
    NoRoot { minimal_degree: Option<usize> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient precision: {0}")]
    Uncertified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error("fixture problem: {0}")]
    Fixture(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
