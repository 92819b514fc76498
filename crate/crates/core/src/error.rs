use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order {order} exceeds the flat-set limit {limit}")]
    GroupTooLarge { order: u64, limit: u64 },

    #[error("element has {got} coordinates, group has {expected}")]
    CoordinateMismatch { expected: usize, got: usize },

    #[error("coordinate {value} out of range for factor {modulus}")]
    CoordinateOutOfRange { value: u64, modulus: u64 },

    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("weights are taken modulo {weights}, group exponent is {group}")]
    ExponentMismatch { weights: u64, group: u64 },

    #[error("operands live in different groups")]
    GroupMismatch,

    #[error("invalid weight set: {0}")]
    InvalidWeights(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires a cyclic group")]
    NotCyclic,

    #[error("divisor set contains no unit of Z_{0}")]
    NoUnit(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("search budget of {limit} nodes exhausted")]
    BudgetExhausted { limit: u64, nodes: u64 },

    #[error("a zero-sum-free sequence of length {cap} exists; the cap is too small")]
    CapExceeded { cap: u64 },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
