use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("series has zero constant term and cannot be inverted")]
    NonUnitSeries,

    #[error("no coefficient growth bound available for an infinite series")]
    MissingGrowthBound,

    #[error("truncation order {0} is too small for a convergent tail bound")]
    TruncationTooSmall(usize),

    #[error("pole: factor 1 - p^(-{0}) vanishes")]
    Pole(i64),

    #[error("enumeration budget exceeded: {what} needs {needed}, budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("{0} is not a cover in the Young lattice")]
    NotACover(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tail bound {bound} too large to certify {digits} digits; raise the truncation")]
    Uncertified { bound: String, digits: u32 },

    #[error("summary contains no samples")]
    EmptySummary,
}

pub type Result<T> = std::result::Result<T, Error>;
