//! The classical A₂ Y-system, the five-term dilogarithm identities, and the
//! quasiclassical limit of γ.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath::{softplus, I};
use crate::dilog::{euler_E, rogers_L, rogers_R};
use crate::error::{Error, Result};
use crate::gamma::GammaEvaluator;
use crate::params::ModularParameter;
use crate::report::VerificationReport;

const ZETA2: f64 = PI * PI / 6.0;

/// `x₁ .. x₇` from `x_{i+2} = (1 + x_{i+1}) / x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YOrbit {
    pub x: [f64; 7],
    pub u: f64,
    pub v: f64,
}

impl YOrbit {
    /// `max(|x₆ - u|/u, |x₇ - v|/v)`.
    pub fn period_defect(&self) -> f64 {
        ((self.x[5] - self.u).abs() / self.u).max((self.x[6] - self.v).abs() / self.v)
    }
}

/// `x₃, x₄, x₅` in closed form.
pub fn y_closed_forms(u: f64, v: f64) -> [f64; 3] {
    [(1.0 + v) / u, (1.0 + u + v) / (u * v), (1.0 + u) / v]
}

pub fn y_orbit(u: f64, v: f64) -> Result<YOrbit> {
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::Domain(format!(
            "the orbit needs u, v > 0, got ({u}, {v})"
        )));
    }
    let mut x = [0.0; 7];
    x[0] = u;
    x[1] = v;
    for i in 0..5 {
        x[i + 2] = (1.0 + x[i + 1]) / x[i];
    }
    Ok(YOrbit { x, u, v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiveTermForm {
    /// `L(x) + L(y) = L(x(1-y)/(1-xy)) + L(xy) + L(y(1-x)/(1-xy))`, `x, y ∈ (0, 1)`.
    L,
    /// `R(u) + R(v) = R(v/(1+u)) + R(uv/(1+u+v)) + R(u/(1+v))`.
    R,
    /// `R(x₁) + R(x₂) = R(1/x₅) + R(1/x₄) + R(1/x₃)` along the orbit.
    Y,
}

impl FiveTermForm {
    pub fn label(self) -> &'static str {
        match self {
            FiveTermForm::L => "five-term identity, Rogers L form",
            FiveTermForm::R => "five-term identity, R form",
            FiveTermForm::Y => "five-term identity, Y-system form",
        }
    }
}

pub fn five_term_residual(form: FiveTermForm, a: f64, b: f64) -> Result<f64> {
    match form {
        FiveTermForm::L => {
            if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
                return Err(Error::Domain(format!(
                    "L form needs x, y in (0, 1), got ({a}, {b})"
                )));
            }
            let d = 1.0 - a * b;
            Ok(rogers_L(a)? + rogers_L(b)?
                - rogers_L(a * (1.0 - b) / d)?
                - rogers_L(a * b)?
                - rogers_L(b * (1.0 - a) / d)?)
        }
        FiveTermForm::R => {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Domain(format!(
                    "R form needs u, v > 0, got ({a}, {b})"
                )));
            }
            Ok(rogers_R(a)? + rogers_R(b)?
                - rogers_R(b / (1.0 + a))?
                - rogers_R(a * b / (1.0 + a + b))?
                - rogers_R(a / (1.0 + b))?)
        }
        FiveTermForm::Y => {
            let o = y_orbit(a, b)?;
            let x = o.x;
            Ok(rogers_R(x[0])? + rogers_R(x[1])?
                - rogers_R(1.0 / x[4])?
                - rogers_R(1.0 / x[3])?
                - rogers_R(1.0 / x[2])?)
        }
    }
}

pub fn five_term_check(form: FiveTermForm, a: f64, b: f64) -> VerificationReport {
    let started = Instant::now();
    let base = VerificationReport::new("classical", form.label(), f64::NAN, 1e-12)
        .param("a", a)
        .param("b", b);
    match five_term_residual(form, a, b) {
        Ok(r) => base.with_residual(r.abs()),
        Err(e) => base.note("error", e),
    }
    .timed(started)
}

/// `ρ(τ) = 2πiτ log γ(z) / E(e^{-iπz/ω})` for real `z` and real `τ > 0`.
pub fn quasiclassical_ratio(z: f64, tau: f64) -> Result<Complex64> {
    let p = ModularParameter::real(tau)?;
    let ev = GammaEvaluator::new(p);
    let (log_g, _) = ev.log_gamma(Complex64::from(z))?;
    let u = (-I * PI * z / p.omega).exp();
    let e = euler_E(u);
    if e.norm() == 0.0 {
        return Err(Error::Domain(format!("E vanishes at z = {z}")));
    }
    Ok(2.0 * PI * I * tau * log_g / e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiclassicalStudy {
    pub taus: Vec<f64>,
    pub ratios: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `log(e_k / e_{k+1}) / log(τ_k / τ_{k+1})` for consecutive pairs.
    pub orders: Vec<f64>,
}

pub fn quasiclassical_study(z: f64, taus: &[f64]) -> Result<QuasiclassicalStudy> {
    if taus.len() < 2 || taus.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain(
            "need a strictly decreasing τ sequence of length >= 2".into(),
        ));
    }
    let ratios = taus
        .iter()
        .map(|&t| quasiclassical_ratio(z, t))
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = ratios.iter().map(|r| (r - 1.0).norm()).collect();
    let orders = errors
        .windows(2)
        .zip(taus.windows(2))
        .map(|(e, t)| (e[0] / e[1]).ln() / (t[0] / t[1]).ln())
        .collect();
    Ok(QuasiclassicalStudy {
        taus: taus.to_vec(),
        ratios,
        errors,
        orders,
    })
}

/// Passes when `|ρ - 1|` falls monotonically along the sequence at an
/// observed order of at least 1 (within `order_slack`); the residual is
/// the shortfall `max(0, 1 - min order)`.
pub fn quasiclassical_gamma_check(z: f64, taus: &[f64]) -> VerificationReport {
    let started = Instant::now();
    let slack = 0.25;
    let base = VerificationReport::new(
        "classical",
        "quasiclassical limit of log gamma",
        f64::NAN,
        slack,
    )
    .param("z", z);
    let report = match quasiclassical_study(z, taus) {
        Ok(s) => {
            let monotone = s.errors.windows(2).all(|e| e[1] < e[0]);
            let min_order = s.orders.iter().copied().fold(f64::INFINITY, f64::min);
            let mut r = base.with_residual(if monotone {
                (1.0 - min_order).max(0.0)
            } else {
                f64::NAN
            });
            for (k, (&t, &e)) in s.taus.iter().zip(&s.errors).enumerate() {
                r = r
                    .param(&format!("tau_{k}"), t)
                    .param(&format!("error_{k}"), e);
            }
            for (k, &o) in s.orders.iter().enumerate() {
                r = r.param(&format!("order_{k}"), o);
            }
            r.note("rate", "observed order from consecutive |rho - 1|")
        }
        Err(e) => base.note("error", e),
    };
    report.timed(started)
}

/// Solution `(p₃, p₄, p₅)` of the stationary phase equations
/// `ln(1+e^{p₃}) = p₂+p₄`, `ln(1+e^{p₄}) = p₃+p₅`, `ln(1+e^{p₅}) = p₄+p₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub p: [f64; 5],
    pub iterations: usize,
    pub residual_trail: Vec<f64>,
}

fn stationary_residual(p1: f64, p2: f64, s: [f64; 3]) -> [f64; 3] {
    [
        softplus(s[0]) - p2 - s[1],
        softplus(s[1]) - s[0] - s[2],
        softplus(s[2]) - s[1] - p1,
    ]
}

fn norm3(r: [f64; 3]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = r[i];
        }
        *o = det(mj) / d;
    }
    Some(out)
}

/// Damped Newton from `p₃ = p₄ = p₅ = 0`.
pub fn solve_stationary(p1: f64, p2: f64) -> Result<StationaryPoint> {
    let sigma = |x: f64| 1.0 / (1.0 + (-x).exp());
    let mut s = [0.0; 3];
    let mut r = stationary_residual(p1, p2, s);
    let mut trail = vec![norm3(r)];
    let mut last_step = f64::INFINITY;
    for it in 0..200 {
        if norm3(r) < 1e-14 * (1.0 + p1.abs() + p2.abs()) {
            return Ok(StationaryPoint {
                p: [p1, p2, s[0], s[1], s[2]],
                iterations: it,
                residual_trail: trail,
            });
        }
        let jac = [
            [sigma(s[0]), -1.0, 0.0],
            [-1.0, sigma(s[1]), -1.0],
            [0.0, -1.0, sigma(s[2])],
        ];
        let step = solve3(jac, r).ok_or(Error::Solver {
            iterations: it,
            last_step,
        })?;
        let mut lambda = 1.0;
        loop {
            let trial = [
                s[0] - lambda * step[0],
                s[1] - lambda * step[1],
                s[2] - lambda * step[2],
            ];
            let rt = stationary_residual(p1, p2, trial);
            if norm3(rt) < norm3(r) || lambda < 1e-6 {
                s = trial;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
        last_step = lambda * norm3(step);
        trail.push(norm3(r));
    }
    Err(Error::Solver {
        iterations: 200,
        last_step,
    })
}

/// `Σ E(x_i) + ½ ln x_i ln(1+x_i)` over five orbit values.
pub fn action_sum(x: &[f64; 5]) -> f64 {
    x.iter()
        .map(|&xi| euler_E(Complex64::from(xi)).re + 0.5 * xi.ln() * xi.ln_1p())
        .sum()
}

/// Solves the stationary phase equations with `p_i = ln x_i`, compares with
/// the orbit of `(e^{p₁}, e^{p₂})`, and checks the action sum `−π²/2`.
pub fn stationary_phase_check(p1: f64, p2: f64) -> VerificationReport {
    let started = Instant::now();
    let base = VerificationReport::new("classical", "stationary phase action sum", f64::NAN, 1e-10)
        .param("p1", p1)
        .param("p2", p2)
        .note(
            "dictionary",
            "p_i = ln x_i; equations = recurrence at i = 2, 3, 4",
        );
    let run = || -> Result<(f64, f64, StationaryPoint)> {
        let sp = solve_stationary(p1, p2)?;
        let orbit = y_orbit(p1.exp(), p2.exp())?;
        let mismatch = (2..5)
            .map(|i| (sp.p[i].exp() - orbit.x[i]).abs() / orbit.x[i])
            .fold(0.0, f64::max);
        let xs = [orbit.x[0], orbit.x[1], orbit.x[2], orbit.x[3], orbit.x[4]];
        let sum = action_sum(&xs);
        Ok((mismatch, (sum + 3.0 * ZETA2).abs(), sp))
    };
    match run() {
        Ok((mismatch, action, sp)) => base
            .with_residual(mismatch.max(action))
            .param("orbit_mismatch", mismatch)
            .param("action_residual", action)
            .param("iterations", sp.iterations as f64),
        Err(e) => base.note("error", e),
    }
    .timed(started)
}

/// `R(x) + E(x) + ½ ln x ln(1+x)`.
pub fn rogers_euler_residual(x: f64) -> Result<f64> {
    Ok(rogers_R(x)? + euler_E(Complex64::from(x)).re + 0.5 * x.ln() * x.ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_examples() {
        let o = y_orbit(1.0, 1.0).unwrap();
        assert_eq!(o.x, [1.0, 1.0, 2.0, 3.0, 2.0, 1.0, 1.0]);
        let o = y_orbit(2.0, 3.0).unwrap();
        let c = y_closed_forms(2.0, 3.0);
        assert_eq!(c, [2.0, 1.0, 1.0]);
        for i in 0..3 {
            assert!((o.x[i + 2] - c[i]).abs() < 1e-14);
        }
        assert!(o.period_defect() < 1e-14);
        assert!(y_orbit(0.0, 1.0).is_err());
    }

    #[test]
    fn five_term_examples() {
        assert!(five_term_residual(FiveTermForm::R, 1.0, 1.0).unwrap().abs() < 1e-12);
        assert!(five_term_residual(FiveTermForm::L, 0.5, 0.5).unwrap().abs() < 1e-12);
        let y = five_term_residual(FiveTermForm::Y, 2.0, 3.0).unwrap();
        let r = five_term_residual(FiveTermForm::R, 2.0, 3.0).unwrap();
        assert!(y.abs() < 1e-12 && (y - r).abs() < 1e-13);
        assert!(five_term_residual(FiveTermForm::L, 1.5, 0.5).is_err());
    }

    #[test]
    fn stationary_point_at_unit_orbit() {
        let sp = solve_stationary(0.0, 0.0).unwrap();
        let x: Vec<f64> = sp.p.iter().map(|p| p.exp()).collect();
        assert!(
            (x[2] - 2.0).abs() < 1e-12 && (x[3] - 3.0).abs() < 1e-12 && (x[4] - 2.0).abs() < 1e-12
        );
        let r = stationary_phase_check(0.0, 0.0);
        assert!(r.passed, "{r:?}");
        assert!(stationary_phase_check(2f64.ln(), 3f64.ln()).passed);
    }

    #[test]
    fn quasiclassical_rate_at_half() {
        let r = quasiclassical_gamma_check(0.5, &[0.2, 0.1, 0.05]);
        assert!(r.passed, "{r:?}");
        assert!(r.params["order_0"] >= 1.0 && r.params["order_1"] >= 1.0);
    }

    #[test]
    fn origin_ratio_is_exact() {
        // at z = 0 the ratio is 1 + τ²
        for tau in [0.2, 0.1] {
            let r = quasiclassical_ratio(0.0, tau).unwrap();
            assert!((r - (1.0 + tau * tau)).norm() < 1e-11, "{r}");
        }
    }
}
