//! `eval` and `table`: single values and plot data.

use std::fmt::Write as _;

use num_complex::Complex64;
use qdilog_core::ysystem::quasiclassical_ratio;
use qdilog_core::{euler_dilog, rogers_L, rogers_R, theta, GammaEvaluator, ModularParameter};
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Function {
    /// γ(z) at the given τ.
    Gamma,
    /// Θ(u) at the given τ.
    Theta,
    /// Euler dilogarithm Li₂(u).
    #[value(name = "Li2", alias = "li2")]
    Li2,
    /// Rogers dilogarithm L(x), 0 ≤ x ≤ 1.
    #[value(name = "L", alias = "l")]
    L,
    /// R(u) = L(u/(1+u)), u ≥ 0.
    #[value(name = "R", alias = "r")]
    R,
    /// ρ(τ) = 2πiτ log γ(z) / E(e^{-iπz/ω}) at fixed z; the table input is τ.
    Rho,
}

impl Function {
    pub fn needs_tau(self) -> bool {
        matches!(self, Function::Gamma | Function::Theta)
    }
}

/// A value with its error estimate; `None` where the evaluator gives none.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluated {
    pub re: f64,
    pub im: f64,
    pub est_error: Option<f64>,
}

impl Evaluated {
    fn complex(v: Complex64, e: Option<f64>) -> Self {
        Self {
            re: v.re,
            im: v.im,
            est_error: e,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn domain(e: qdilog_core::Error) -> CliError {
    CliError::Domain(e.to_string())
}

fn real_point(f: Function, z: Complex64) -> Result<f64, CliError> {
    if z.im != 0.0 {
        return Err(CliError::Domain(format!(
            "{f:?} takes a real argument, got {z}"
        )));
    }
    Ok(z.re)
}

/// Evaluates `f` at `z`. `tau` is required for γ, Θ; for ρ the point is τ and
/// `rho_z` is the fixed z.
pub struct Evaluator {
    f: Function,
    gamma: Option<GammaEvaluator>,
    params: Option<ModularParameter>,
    rho_z: f64,
}

impl Evaluator {
    pub fn new(f: Function, tau: Option<Complex64>, rho_z: f64) -> Result<Self, CliError> {
        let (gamma, params) = match (f.needs_tau(), tau) {
            (true, None) => return Err(CliError::Usage(format!("{f:?} needs --tau"))),
            (true, Some(t)) => {
                let p = ModularParameter::new(t).map_err(domain)?;
                (Some(GammaEvaluator::new(p)), Some(p))
            }
            (false, _) => (None, None),
        };
        Ok(Self {
            f,
            gamma,
            params,
            rho_z,
        })
    }

    pub fn eval(&self, z: Complex64) -> Result<Evaluated, CliError> {
        match self.f {
            Function::Gamma => {
                let v = self
                    .gamma
                    .as_ref()
                    .expect("checked in new")
                    .gamma(z)
                    .map_err(domain)?;
                Ok(Evaluated::complex(v.value, Some(v.est_error)))
            }
            Function::Theta => {
                let v = theta(z, self.params.as_ref().expect("checked in new")).map_err(domain)?;
                Ok(Evaluated::complex(v.value, Some(v.est_error)))
            }
            Function::Li2 => Ok(Evaluated::complex(euler_dilog(z), None)),
            Function::L => Ok(Evaluated::complex(
                rogers_L(real_point(self.f, z)?).map_err(domain)?.into(),
                None,
            )),
            Function::R => Ok(Evaluated::complex(
                rogers_R(real_point(self.f, z)?).map_err(domain)?.into(),
                None,
            )),
            Function::Rho => {
                let tau = real_point(self.f, z)?;
                Ok(Evaluated::complex(
                    quasiclassical_ratio(self.rho_z, tau).map_err(domain)?,
                    None,
                ))
            }
        }
    }
}

pub fn format_value(v: &Evaluated) -> String {
    let mut s = if v.im == 0.0 {
        format!("{:.7}", v.re)
    } else {
        format!("{:.7}{:+.7}i", v.re, v.im)
    };
    if let Some(e) = v.est_error {
        let _ = write!(s, "  (est. error {e:.1e})");
    }
    s
}

/// `from, from + step, ...` up to `to`, with the count rounded so that float
/// drift neither drops nor adds the endpoint.
pub fn range(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(from.is_finite() && to.is_finite() && to >= from) {
        return Err(CliError::Usage(format!("range [{from}, {to}] is empty")));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| from + k as f64 * step).collect())
}

/// CSV with columns `input,re,im,est_error`; rows where the function is not
/// defined carry empty value columns.
pub fn table(ev: &Evaluator, inputs: &[f64]) -> String {
    let rows: Vec<(f64, Result<Evaluated, CliError>)> = inputs
        .par_iter()
        .map(|&x| (x, ev.eval(Complex64::from(x))))
        .collect();
    let mut s = String::from("input,re,im,est_error\n");
    for (x, v) in rows {
        match v {
            Ok(v) => {
                let e = v.est_error.map(|e| format!("{e:e}")).unwrap_or_default();
                let _ = writeln!(s, "{x},{:e},{:e},{e}", v.re, v.im);
            }
            Err(_) => {
                let _ = writeln!(s, "{x},,,");
            }
        }
    }
    s
}
