use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modular parameter tau = {tau}: {reason}")]
    InvalidTau {
        tau: Complex64,
        reason: &'static str,
    },

    #[error("z = {z} lies within {distance:.3e} of the pole {pole}")]
    NearPole {
        z: Complex64,
        pole: Complex64,
        distance: f64,
    },

    #[error("integration did not reach tolerance: {0}")]
    NonConvergence(String),

    #[error("argument {0} lies on the branch cut")]
    BranchCut(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("q^(2n) = 1 at n = {0}; the q-exponential coefficients are undefined")]
    RootOfUnity(usize),

    #[error("weyl algebra: {0}")]
    Algebra(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("spectral shift would amplify round-off to {estimate:.3e} (limit {limit:.3e})")]
    Amplification { estimate: f64, limit: f64 },

    #[error("solver did not converge after {iterations} iterations (last step {last_step:.3e})")]
    Solver { iterations: usize, last_step: f64 },

    #[error("extrapolation did not stabilise: {0}")]
    Extrapolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
