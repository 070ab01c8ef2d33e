use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ring Z/{p}^{n} is too large for exact word arithmetic")]
    RingTooLarge { p: u64, n: u32 },
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("zero has no square class")]
    ZeroSquareClass,
    #[error("capacity exceeded: {what} needs {requested} slots, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("operation requires a monic form v1^2 + a1 v1 v2 + a2 v2^2")]
    NotMonic,
    #[error("operation requires a ramified representative")]
    NotRamified,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("invalid local condition: {0}")]
    InvalidCondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed cache record: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
