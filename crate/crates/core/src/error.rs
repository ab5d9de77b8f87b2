use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty or non-square table")]
    MalformedTable,
    #[error("product {a}*{b} = {value} is outside 0..{order}")]
    NotClosed {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("invalid family parameters: {0}")]
    InvalidSpec(String),
    #[error("no integer of multiplicative order {order} modulo {modulus}")]
    NoSuchK { modulus: u64, order: u64 },
    #[error("argument outside the formula's domain: {0}")]
    ArgumentDomain(String),
    #[error("orders {0} and {1} are not coprime")]
    CoprimalityRequired(usize, usize),
    #[error("sd(H,G) differs between conjugate subgroups {0} and {1}")]
    ClassConstancyViolation(usize, usize),
    #[error("prime search passed 2^63")]
    SearchBoundExceeded,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}
