use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field parameter d = {0}: must be squarefree and not 0 or 1")]
    InvalidD(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field Q(sqrt({0})) is not real quadratic")]
    NotRealField(i64),
    #[error("operation is undefined for the zero element")]
    ZeroElement,
    #[error("elements belong to different fields: {0} and {1}")]
    FieldMismatch(String, String),
    #[error(
        "no generator found for the prime ideal at {place} within coordinate bound {bound}; \
         the ideal is likely non-principal (class number > 1)"
    )]
    GeneratorNotFound { place: String, bound: u64 },
    #[error("expected {expected} archimedean values, got {got}")]
    IncompleteArchValues { expected: usize, got: usize },
    #[error("cannot evaluate a map based at {base} on places of {target}: compositum not implemented")]
    UnsupportedFieldPair { base: String, target: String },
    #[error("maps have different base fields: {0} and {1}")]
    BaseMismatch(String, String),
    #[error("linear system is singular (determinant {0:e})")]
    SingularSystem(f64),
    #[error("log of the generator's absolute value at {0} is zero")]
    ZeroDenominator(String),
    #[error("element is not an S-unit: nonzero valuation at {0}")]
    NotSUnit(String),
    #[error("non-integral generator exponent {exponent} at {place}")]
    NonIntegralExponent { place: String, exponent: String },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("cannot factor {0}: has a prime factor beyond the sieve range")]
    FactorTooLarge(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid consistent map: {0}")]
    InvalidMap(String),
    #[error("invalid place {0}")]
    InvalidPlace(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
