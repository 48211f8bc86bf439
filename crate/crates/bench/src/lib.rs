//! Fixed inputs shared by the benchmarks.

use num_complex::Complex64;
use qdilog_core::{GammaEvaluator, ModularParameter};

pub fn evaluator(tau: f64) -> GammaEvaluator {
    GammaEvaluator::new(ModularParameter::real(tau).expect("positive tau"))
}

/// Real sample points spread over `[-5, 5]`.
pub fn real_points(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from(-5.0 + 10.0 * j as f64 / (n.max(2) - 1) as f64))
        .collect()
}
