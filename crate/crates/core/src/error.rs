use thiserror::Error;

use crate::expr::{ParseError, TypeError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("division by zero: |z| is within tolerance of 0")]
    DivisionByZero,
    #[error("matrix is not of the form [[a,-b],[b,a]] (residual {residual:.3e})")]
    NotInRepresentationSubset { residual: f64 },
    #[error("nilpotent family member N({a},{b}) needs both parameters nonzero")]
    DegenerateFamilyMember { a: f64, b: f64 },
    #[error("element has even-grade terms (grade {grade})")]
    NotOddGrade { grade: usize },
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid odd function: {0}")]
    InvalidOddFunction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid encoding: {0}")]
    Encoding(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("usage: {0}")]
    Usage(String),
}
