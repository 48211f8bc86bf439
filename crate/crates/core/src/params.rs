//! The modular parameter τ and every constant derived from it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// τ together with the lattice half-periods and the phase constants that
/// appear in the functional equations of γ.
///
/// Branch convention: `omega = i / (2 sqrt(tau))` with the principal square
/// root, so both half-periods are pure imaginary with positive imaginary part
/// when τ is real and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularParameter {
    pub tau: Complex64,
    pub omega: Complex64,
    pub omega_prime: Complex64,
    pub omega_dprime: Complex64,
    pub q: Complex64,
    pub q_tilde: Complex64,
    pub beta: Complex64,
    pub alpha: Complex64,
    pub c: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ModularParameter {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(Error::InvalidTau {
                tau,
                reason: "not finite",
            });
        }
        if tau == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidTau {
                tau,
                reason: "tau = 0",
            });
        }
        if tau.im == 0.0 && tau.re < 0.0 {
            return Err(Error::InvalidTau {
                tau,
                reason: "negative real tau: sqrt(tau) has no branch in this convention",
            });
        }
        if tau.re <= 0.0 && tau.im <= 0.0 {
            return Err(Error::InvalidTau {
                tau,
                reason: "need Re tau > 0 or Im tau > 0",
            });
        }
        let sqrt_tau = tau.sqrt();
        let omega = I / (2.0 * sqrt_tau);
        let omega_prime = I * sqrt_tau / 2.0;
        let omega_dprime = omega + omega_prime;
        let sum = tau + tau.inv();
        let beta = PI / 12.0 * sum;
        let alpha = 3.0 * beta + PI / 4.0;
        let c = (-I * PI / 12.0 * sum - I * PI / 4.0).exp();
        let two_pi_i = 2.0 * PI * I;
        Ok(Self {
            tau,
            omega,
            omega_prime,
            omega_dprime,
            q: (I * PI * tau).exp(),
            q_tilde: (-I * PI / tau).exp(),
            beta,
            alpha,
            c,
            c1: two_pi_i * c,
            c2: -c / two_pi_i,
        })
    }

    pub fn real(tau: f64) -> Result<Self> {
        Self::new(Complex64::new(tau, 0.0))
    }

    /// The parameter for 1/τ; swaps ω with ω′, and maps q to 1/q̃.
    pub fn dual(&self) -> Result<Self> {
        Self::new(self.tau.inv())
    }

    pub fn is_real(&self) -> bool {
        self.tau.im == 0.0
    }

    /// `a` in `ω = i a`; real and positive for real τ.
    pub fn a(&self) -> Complex64 {
        -I * self.omega
    }

    /// `b` in `ω′ = i b`.
    pub fn b(&self) -> Complex64 {
        -I * self.omega_prime
    }

    /// Height of the strip `|Im z| < Im ω″` on which the defining integral
    /// of γ converges.
    pub fn strip_half_width(&self) -> f64 {
        self.omega_dprime.im
    }

    /// The alternative reading `(iπ/4)(τ + 1/τ + 1)` of the middle member of
    /// the α formula, kept for report metadata only.
    pub fn alpha_literal_reading(&self) -> Complex64 {
        I * PI / 4.0 * (self.tau + self.tau.inv() + 1.0)
    }
}

/// Builds the parameter set for τ.
pub fn make_params(tau: Complex64) -> Result<ModularParameter> {
    ModularParameter::new(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn tau_one_constants() {
        let p = ModularParameter::real(1.0).unwrap();
        assert!(close(p.omega, I * 0.5, 1e-15));
        assert!(close(p.omega_prime, I * 0.5, 1e-15));
        assert!(close(p.omega_dprime, I, 1e-15));
        assert!(close(p.beta, Complex64::from(PI / 6.0), 1e-15));
        assert!(close(p.alpha, Complex64::from(3.0 * PI / 4.0), 1e-15));
        assert!(close(p.q, Complex64::from(-1.0), 1e-15));
        let c_sq = (I * PI * (-1.0 / 3.0 - 0.5)).exp();
        assert!(close(p.c * p.c, c_sq, 1e-14));
        assert!(close(c_sq, (-5.0 * I * PI / 6.0).exp(), 1e-15));
    }

    #[test]
    fn tau_four_constants() {
        let p = ModularParameter::real(4.0).unwrap();
        assert!(close(p.omega, I * 0.25, 1e-15));
        assert!(close(p.omega_prime, I, 1e-15));
        assert!(close(p.omega_dprime, I * 1.25, 1e-15));
        assert!(close(p.beta, Complex64::from(PI / 12.0 * 4.25), 1e-15));
    }

    #[test]
    fn invariants_on_several_tau() {
        let taus = [
            Complex64::new(0.05, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(7.5, 0.0),
            Complex64::from_polar(1.0, PI / 6.0),
            Complex64::new(-0.3, 0.8),
            Complex64::new(0.4, -0.2),
        ];
        for tau in taus {
            let p = make_params(tau).unwrap();
            assert!((p.omega * p.omega_prime + 0.25).norm() < 1e-14, "{tau}");
            assert!(close(p.omega_prime / p.omega, tau, 1e-13), "{tau}");
            assert!((p.c * p.c + p.c1 * p.c2).norm() < 1e-14);
            let c_sq = (I * PI * (-(tau + tau.inv()) / 6.0 - 0.5)).exp();
            assert!(close(p.c * p.c, c_sq, 1e-13));
            let w2 = -(tau + tau.inv() + 2.0) / 4.0;
            assert!(close(p.omega_dprime * p.omega_dprime, w2, 1e-13));
            // c² = e^{iβ} e^{iπ ω″²}
            assert!(close(
                p.c * p.c,
                (I * p.beta + I * PI * p.omega_dprime * p.omega_dprime).exp(),
                1e-13
            ));
            if p.is_real() {
                assert!(p.alpha.im.abs() < 1e-14 && p.beta.im.abs() < 1e-14);
                assert!(p.omega.re == 0.0 && p.omega.im > 0.0);
                assert!(p.omega_prime.re.abs() < 1e-16 && p.omega_prime.im > 0.0);
                let a = PI / 4.0 * (tau.re + 1.0 / tau.re + 1.0);
                assert!((p.alpha.re - a).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn duality_swaps_periods() {
        for tau in [0.5, 2.0] {
            let p = ModularParameter::real(tau).unwrap();
            let d = p.dual().unwrap();
            assert!(close(d.omega, p.omega_prime, 1e-15));
            assert!(close(d.omega_prime, p.omega, 1e-15));
            assert!(close(d.omega_dprime, p.omega_dprime, 1e-15));
            // q(1/τ) = e^{iπ/τ} is the inverse of q̃(τ) = e^{-iπ/τ}
            assert!(close(d.q, p.q_tilde.inv(), 1e-14));
            assert!(close(d.q_tilde, p.q.inv(), 1e-14));
            assert!(close(d.beta, p.beta, 1e-15));
            assert!(close(d.alpha, p.alpha, 1e-15));
        }
    }

    #[test]
    fn rejects_bad_tau() {
        assert!(ModularParameter::real(0.0).is_err());
        assert!(ModularParameter::real(-1.0).is_err());
        assert!(ModularParameter::new(Complex64::new(-1.0, -1.0)).is_err());
        assert!(ModularParameter::new(Complex64::new(f64::NAN, 0.0)).is_err());
    }
}
