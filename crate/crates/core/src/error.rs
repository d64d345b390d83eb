use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants split into two families: mathematical domain errors (inverting
/// zero, a non-residue under a square root, a diverging substitution) and
/// precision exhaustion, where a truncated window is too short to certify
/// the requested quantity. The CLI maps them to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no square root in K: {0}")]
    NoSquareRoot(String),

    #[error("divergent substitution: |s| = p^{0} is not below 1")]
    DivergentSubstitution(i64),

    #[error("cannot certify invertibility: every coefficient in the window [{start}, {prec}) is zero")]
    CannotCertify { start: i64, prec: i64 },

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("not in psi(AZ) to precision: {0}")]
    NotInImage(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures caused by a too-short truncation window rather than
    /// by the mathematics.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::CannotCertify { .. } | Error::InsufficientPrecision(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
