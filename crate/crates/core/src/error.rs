use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field of size {p}^{n} exceeds the supported bound of {limit} elements")]
    FieldTooLarge { p: u32, n: u32, limit: u64 },
    #[error("subfield degree {d} does not divide extension degree {n}")]
    NotDivisor { d: u32, n: u32 },
    #[error("the zero element is not allowed here")]
    ZeroElement,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("quadratic form has odd rank {0}; its type is undefined")]
    OddRank(u32),
    #[error("work budget exceeded: {needed} evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("verification mismatch: {0}")]
    Mismatch(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
