use crate::exact::Rational;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("input sequence must be nonempty")]
    EmptyInput,
    #[error("period must be nonempty")]
    EmptyPeriod,
    #[error("{value} is not in Z[1/{p}]")]
    NotInRing { value: Rational, p: u64 },
    #[error("continued fraction does not converge {0}-adically")]
    NotConvergent(u64),
    #[error("working precision exhausted; retry with more digits")]
    PrecisionExhausted,
    #[error("{0} is a perfect square")]
    PerfectSquare(u64),
    #[error("{0} is not square-free")]
    NotSquareFree(i64),
    #[error("x^2 - {0} y^2 = -1 has no solution")]
    NoNegativePell(u64),
    #[error("b1 is a root of the polynomial")]
    RootInput,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoeff,
    #[error("denominator of the family formula vanishes")]
    DegenerateDenominator,
    #[error("polynomial is not in a degenerate configuration")]
    NotDegenerate,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
