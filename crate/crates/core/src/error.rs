use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be at least 1")]
    ZeroArgument,
    #[error("value {value} exceeds maximum {max}")]
    ValueExceedsMax { value: u64, max: u64 },
    #[error("input string must be nonempty")]
    EmptyInput,
    #[error("strings must have equal length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("string is not balanced")]
    NotBalanced,
    #[error("string is not strictly Catalan")]
    NotStrictlyCatalan,
    #[error("not a codeword: {0}")]
    NotACodeword(String),
    #[error("invalid bit character {0:?}; expected '0' or '1'")]
    InvalidBitChar(char),
    #[error("channel {channel} outside universe [1, {n}]")]
    InvalidChannel { channel: u32, n: u32 },
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("invalid channel set: {0}")]
    InvalidChannelSet(String),
    #[error("set of size {size} exceeds maximum {max}")]
    SetTooLarge { size: usize, max: usize },
    #[error("verification capped at n = {cap}, got n = {n}")]
    VerificationCapExceeded { n: u32, cap: u32 },
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("channel sets are disjoint")]
    DisjointSets,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

pub type Result<T> = std::result::Result<T, Error>;
