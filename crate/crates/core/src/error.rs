use num_complex::Complex64;
use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource cap exceeded: n = {n} exceeds n_max = {n_max} (override with KACZETA_MAX_N)")]
    CapExceeded { n: usize, n_max: usize },

    #[error("quadrature failure: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("eigensolve failure: {0}")]
    Eigensolve(String),

    #[error("pole: determinant factor for alpha = {alpha:?} vanishes at beta = {beta}, z = {z}")]
    PoleAt {
        beta: f64,
        z: Complex64,
        alpha: Vec<u8>,
    },

    #[error("series outside its convergence domain: |z|*2*exp(|beta|*c) = {0} >= 1")]
    ConvergenceDomain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
