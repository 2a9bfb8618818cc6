use num_rational::BigRational;
use thiserror::Error;

use crate::poly::QPoly;

/// Failures of the exact arithmetic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("denominator vanishes at q = {0}")]
    Pole(BigRational),
    #[error("cyclotomic index must be at least 1")]
    ZeroCyclotomicIndex,
    #[error("denominator factor {0} is not a product of cyclotomic polynomials")]
    NonCyclotomic(QPoly),
    #[error("malformed coefficient string {0:?}")]
    Parse(String),
}

/// Top-level error used by the verification drivers and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
