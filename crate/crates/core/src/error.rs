use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into four families that the command line maps onto exit
/// codes: invalid input, resource caps, verification failures and internal
/// assertions (see [`Error::kind`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: String, right: String },

    #[error("leading coefficient {0} of the divisor is not a unit")]
    NonUnitLeading(String),

    #[error("modulus {0} is not prime")]
    CompositeModulus(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("moduli have different primes: {0} and {1}")]
    DifferentPrime(u64, u64),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("constant polynomial has no irreducibility status")]
    ConstantPolynomial,

    #[error("no element of order {order}: it does not divide {group_order}")]
    OrderDoesNotDivide { order: u64, group_order: String },

    #[error("factors are not pairwise coprime mod {p}: {detail}")]
    NotCoprime { p: u64, detail: String },

    #[error("product of the factors does not match the polynomial mod {0}")]
    ProductMismatch(u64),

    #[error("root {root} is not simple mod {p} (derivative vanishes)")]
    NonSimpleRoot { root: String, p: u64 },

    #[error("reduction mod {p} is not squarefree: {diagnostic}")]
    NotSquarefree { p: u64, diagnostic: String },

    #[error("element is not a unit: it lies in the maximal ideal generated by {0}")]
    ZeroDivisor(u64),

    #[error("resource cap exceeded: {what} = {value} > {cap}")]
    ResourceCap { what: String, value: u64, cap: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Cap,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceCap { .. } => ErrorKind::Cap,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
