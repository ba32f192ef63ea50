use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported center dimension k = {0}")]
    UnsupportedDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ball point has radius {0} >= 1")]
    OutsideBall(f64),
    #[error("series did not converge after {iterations} terms (partial sum {partial_re} + {partial_im}i)")]
    NonConvergence {
        iterations: usize,
        partial_re: f64,
        partial_im: f64,
    },
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("tail estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    TailBound { estimate: f64, tolerance: f64 },
    #[error("finite-difference step underflow at scale {0:e}")]
    StepUnderflow(f64),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
