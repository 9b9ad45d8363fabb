use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the arithmetic layers and the command line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand must be positive, got {0}")]
    NonPositiveRadicand(BigInt),
    #[error("radicand {0} is a perfect square; value is rational")]
    SquareRadicand(BigInt),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("continued fraction period must be nonempty")]
    EmptyPeriod,
    #[error("invalid partial quotient {0}: period entries must be >= 1")]
    InvalidPartialQuotient(BigInt),
    #[error("order elements live over different quadratic irrationals")]
    MismatchedTheta,
    #[error("product {0} leaves the order Z + Z*theta")]
    NotInOrder(String),
    #[error("element with norm {0} is not a unit")]
    NotAUnit(String),
    #[error("conductor must be >= 1")]
    InvalidConductor,
    #[error("modulus p must be >= 2, got {0}")]
    InvalidModulus(BigInt),
    #[error("power search exceeded cap of {0} iterations")]
    SearchCapExceeded(u64),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("skew polynomials carry different automorphisms")]
    MismatchedAutomorphism,
    #[error("automorphism is not invertible (p = 0)")]
    SingularAutomorphism,
    #[error("automorphism does not commute with conjugation; involution undefined")]
    NotStarCoherent,
    #[error("relation does not reduce to zero under the rewrite system")]
    NotInIdeal,
    #[error("curve is singular (discriminant 0)")]
    SingularCurve,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p} is a bad prime for the curve")]
    BadPrime { p: u64 },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
