use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point left the upper half-plane (Im z = {0:e})")]
    HyperbolicDomain(f64),
    #[error("group element has determinant {0}, expected 1")]
    InvalidGroupElement(f64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("invalid barycentric coordinates: {0}")]
    InvalidBarycentric(String),
    #[error("degenerate cone coordinate (1 - t0 = {0:e})")]
    DegenerateCoordinate(f64),
    #[error("integration box does not contain the cut-off support: {0}")]
    Truncation(String),
    #[error("cut-off normalization vanishes ({0:e}) at the requested point")]
    ZeroDenominator(f64),
    #[error("convolution support escapes the lattice box at {0:?}")]
    BoxOverflow(Vec<i64>),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("not idempotent: |p^2 - p| = {0:e}")]
    NotIdempotent(f64),
    #[error("pairing {0} is not within tolerance of an integer")]
    NonIntegralPairing(f64),
    #[error("no graded piece of degree {needed} to complete the top degree {top}")]
    DegreeMismatch { needed: usize, top: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
