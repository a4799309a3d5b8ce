use thiserror::Error;

/// Errors produced by the semigroup, monoid and fitting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator list is empty")]
    Empty,
    #[error("generators must be positive integers")]
    ZeroGenerator,
    #[error("the semigroup <1> is degenerate: every element factors uniquely")]
    Degenerate,
    #[error("1 cannot be a generator alongside other generators")]
    ContainsOne,
    #[error("generators have gcd {0}, not 1")]
    GcdNotOne(u64),
    #[error("generator {0} lies in the semigroup generated by the others")]
    NotMinimal(u64),
    #[error("modulus {0} is not an element of the semigroup")]
    ModulusNotInSemigroup(u64),
    #[error("{0} is not an element of the semigroup")]
    NotInSemigroup(u64),
    #[error("{0} is not an element of the monoid")]
    NotInMonoid(String),
    #[error("threshold not met: need n > {threshold}, got {n}")]
    ThresholdNotMet { n: u64, threshold: u128 },
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("window too short: need at least {needed} samples, have {have}")]
    WindowTooShort { needed: usize, have: usize },
    #[error("a^2 = a mod b fails for a = {a}, b = {b}")]
    NotIdempotent { a: u64, b: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("trial division limit reached while factoring {0}")]
    FactoringLimit(u128),
    #[error("construction failed its exponent check: {0}")]
    ConstructionInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
