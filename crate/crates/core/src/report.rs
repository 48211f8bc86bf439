use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// Outcome of a single identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub identity: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub provenance: BTreeMap<String, String>,
    pub wall_time: f64,
}

impl VerificationReport {
    /// `passed` is derived here and nowhere else; a NaN residual fails.
    pub fn new(suite: &str, identity: &str, residual: f64, tolerance: f64) -> Self {
        assert!(!identity.is_empty(), "identity label must be nonempty");
        Self {
            suite: suite.to_string(),
            identity: identity.to_string(),
            params: BTreeMap::new(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            provenance: BTreeMap::new(),
            wall_time: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.provenance.insert(key.to_string(), value.to_string());
        self
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.wall_time = started.elapsed().as_secs_f64();
        self
    }

    pub fn tau(self, tau: num_complex::Complex64) -> Self {
        self.param("tau_re", tau.re).param("tau_im", tau.im)
    }

    /// Marks a report whose pass flag depends on more than `residual <= tolerance`.
    pub fn pass_rule(self, rule: &str) -> Self {
        self.note("pass_rule", rule)
    }

    /// User tolerance override. Reports with their own pass rule keep it.
    pub fn override_tolerance(mut self, tolerance: f64) -> Self {
        if self.provenance.contains_key("pass_rule") {
            return self.note(
                "tolerance_override",
                "not applied: report has its own pass rule",
            );
        }
        self.tolerance = tolerance;
        self.passed = self.residual <= tolerance;
        self
    }

    /// Replaces the residual, keeping `passed` consistent.
    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self.passed = residual <= self.tolerance;
        self
    }
}

/// Largest element, propagating NaN so that a broken sample cannot hide.
pub fn max_residual<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, |acc, v| {
        if v.is_nan() || acc.is_nan() {
            f64::NAN
        } else {
            acc.max(v)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_residual() {
        assert!(VerificationReport::new("s", "x", 1e-9, 1e-8).passed);
        assert!(!VerificationReport::new("s", "x", 1e-7, 1e-8).passed);
        assert!(!VerificationReport::new("s", "x", f64::NAN, 1e-8).passed);
        let r = VerificationReport::new("s", "x", 0.0, 1e-8).with_residual(1.0);
        assert!(!r.passed);
    }

    #[test]
    fn max_keeps_nan() {
        assert!(max_residual([1.0, f64::NAN, 2.0]).is_nan());
        assert_eq!(max_residual([1.0, 3.0, 2.0]), 3.0);
    }
}
