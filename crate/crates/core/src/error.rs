//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// r² + 4s = 0: the characteristic polynomial has a double root and the
    /// closed form over ℚ(√D) does not exist.
    #[error("discriminant r^2 + 4s is zero for (r, s) = ({r}, {s})")]
    ZeroDiscriminant { r: i64, s: i64 },

    /// The sequence is degenerate where a non-degenerate one is required.
    #[error("degenerate sequence: {reason}")]
    Degenerate { reason: String },

    /// Lucas-type operations require gcd(r, s) = 1.
    #[error("coefficients (r, s) = ({r}, {s}) are not coprime")]
    NotCoprime { r: i64, s: i64 },

    /// An argument that must be prime is not.
    #[error("{n} is not prime")]
    NotPrime { n: u64 },

    /// Rank of apparition is undefined when p divides s.
    #[error("prime {p} divides s = {s}; rank of apparition is undefined")]
    RankUndefined { p: u64, s: i64 },

    /// An element that must be invertible mod p is divisible by p.
    #[error("{value} is divisible by the modulus {p}")]
    DividesModulus { value: String, p: u64 },

    /// A term that must be nonzero vanished.
    #[error("term u_{n} is zero in the requested range")]
    ZeroTerm { n: u64 },

    /// Division by zero (or by a zero divisor) in exact arithmetic.
    #[error("division by zero or zero divisor: {0}")]
    DivisionByZero(String),

    /// Catch-all for malformed inputs.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mathematical invariant the code relies on was violated; indicates a
    /// bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
