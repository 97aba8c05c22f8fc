use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gcd(K, N) must be 1, got K = {k}, N = {n}")]
    NotCoprime { k: u32, n: u32 },

    #[error("K must be at least 2, got {0}")]
    RankTooSmall(u32),

    #[error("N must be positive")]
    ZeroPole,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("deg Q_{index} = {degree} exceeds the bound {bound}")]
    DegreeBound { index: usize, degree: usize, bound: i64 },

    #[error("solution has not converged")]
    NotConverged,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
