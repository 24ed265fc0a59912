use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("basis is rank deficient")]
    RankDeficient,
    #[error("matrix is singular")]
    Singular,
    #[error("lattice dimension {dim} exceeds the enumeration cap {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("scales are incommensurate (ratio is not a rational square)")]
    IncommensurateScales,
    #[error("gcd({a}, {m}) != 1")]
    NotCoprime { a: u64, m: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{count} irreducible factors exceed the subset enumeration cap {cap}")]
    TooManyFactors { count: usize, cap: usize },
    #[error("no admissible prime found below {0}")]
    SearchExhausted(u64),
    #[error("integer overflow: {0}")]
    Overflow(&'static str),
}
