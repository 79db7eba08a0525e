use thiserror::Error;

/// Errors raised by the group engine and the verifier.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),

    #[error("q = {0} is not a supported prime power (need q >= 4)")]
    BadOrder(u64),

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("subgroup of order {order} is not maximal in a group of order {parent}")]
    NotMaximal { order: usize, parent: usize },

    #[error("no dihedral subgroup D_{} in PSL(2,{q}): {d} does not divide (q±1)/(2,q-1)", 2 * d)]
    NoSuchSubgroup { q: u32, d: usize },

    #[error("{label} is not a subgroup of PSL(2,{q})")]
    NotPresent { label: String, q: u32 },

    #[error("element ({eta}, {perm}) is not central in D^t ∩ L")]
    NotCentral { eta: u32, perm: usize },

    #[error("conflicting values for alpha({point}): {first} vs {second}")]
    Inconsistent { point: u32, first: u32, second: u32 },

    #[error("gamma must be a nonidentity element")]
    TrivialElement,

    #[error("q = {0} is congruent to 1 mod 4")]
    WrongCongruence(u32),

    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),

    #[error("operation needs m = {expected}, got m = {got}")]
    WrongDegree { expected: usize, got: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
