use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The criterion's hypotheses do not hold for this prime (ramified or
    /// inert prime, `p | h_K`, or a side condition).
    #[error("criterion inapplicable for p = {p}: {reason}")]
    Inapplicable { p: u64, reason: String },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("{0} is not square-free")]
    NotSquareFree(u64),

    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),

    /// Two evaluation routes that must agree returned different answers.
    #[error("route mismatch for p = {p}: {detail}")]
    RouteMismatch { p: u64, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! ensure {
    ($cond:expr, $err:expr) => {
        if !$cond {
            return Err($err);
        }
    };
}
pub(crate) use ensure;
