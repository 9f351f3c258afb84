use thiserror::Error;

/// Errors raised by the algebra engine.
///
/// Variants that describe "impossible" outcomes (`InexactDivision`,
/// `SemidirectViolation`, `SingularLeadingCoefficient`) signal a broken
/// invariant rather than bad user input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent {exponent} is not a multiple of 1/{denominator}; increase the denominator D")]
    DenominatorMismatch { exponent: String, denominator: u32 },

    #[error("lattice rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("matrix is not an integral automorphism of the lattice")]
    NonIntegralAction,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("orbit or group enumeration exceeded the cap of {cap} elements")]
    OrbitCapExceeded { cap: usize },

    #[error("unsupported root system type {0}")]
    UnsupportedType(String),

    #[error("vector {0:?} is not a root of the datum")]
    NotARoot(Vec<i32>),

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("semidirect structure violated: {0}")]
    SemidirectViolation(String),

    #[error("parameter placement: {0}")]
    ParameterPlacement(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("conjugate simple roots {first} and {second} carry different parameters")]
    UnequalConjugateParameters { first: usize, second: usize },

    #[error("denominator leaves the admissible factor set: {0}")]
    NonDisciplinedDenominator(String),

    #[error("leading coefficient at {0} is not a unit of the Laurent ring")]
    SingularLeadingCoefficient(String),

    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("simple index {index} out of range (datum has {count} simple roots)")]
    SimpleIndexOutOfRange { index: usize, count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
