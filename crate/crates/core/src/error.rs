use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = 2 is not supported: the densities are only derived for odd primes")]
    PrimeTwoUnsupported,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Hensel precondition failed: {0}")]
    HenselPrecondition(String),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("precision {k} is outside 1..={max} for p = {p}")]
    Precision { p: u64, k: u32, max: u32 },
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{0} is not a p-adic unit")]
    NotUnit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
