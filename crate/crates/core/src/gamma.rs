//! The modular quantum dilogarithm γ(z), the function Θ(u) it induces, the
//! compact q-exponential, and the pointwise property checks.
//!
//! Inside the strip `|Im z| < Im ω″` the logarithm is the contour integral
//!
//! ```text
//! log γ(z) = ¼ ∫ e^{itz} / (t sinh(ωt/i) sinh(ω′t/i)) dt
//! ```
//!
//! along a path passing above `t = 0`. Outside the strip the functional
//! equations in `ω′` and `ω` carry the argument back in.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath::{one_plus_exp, rel_diff, I};
use crate::error::{Error, Result};
use crate::params::ModularParameter;
use crate::quad::Quadrature;
use crate::report::{max_residual, VerificationReport};

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DilogValue {
    pub value: Complex64,
    pub est_error: f64,
}

/// Shape of the integration path for the log integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contour {
    /// The horizontal line `Im t = contour_offset`.
    Line,
    /// The real axis with a half circle of the given radius above `t = 0`.
    Indented { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEvaluator {
    pub params: ModularParameter,
    pub contour_offset: f64,
    /// Upper bound on the truncation `T`; the working value is chosen per `z`.
    pub truncation: f64,
    pub panel_tolerance: f64,
    /// Direct evaluation is used for `|Im z| <= (1 - strip_margin) Im ω″`.
    pub strip_margin: f64,
    /// `z` closer than this to a pole is rejected.
    pub pole_radius: f64,
    pub contour: Contour,
}

impl GammaEvaluator {
    pub fn new(params: ModularParameter) -> Self {
        let delta = 0.5 * Self::lowest_pole_height(&params);
        Self {
            params,
            contour_offset: delta,
            truncation: 2000.0,
            panel_tolerance: 1e-13,
            strip_margin: 0.2,
            pole_radius: 1e-12,
            contour: Contour::Line,
        }
    }

    pub fn for_tau(tau: Complex64) -> Result<Self> {
        Ok(Self::new(ModularParameter::new(tau)?))
    }

    /// Height of the lowest singularity of the integrand above the real axis.
    pub fn lowest_pole_height(p: &ModularParameter) -> f64 {
        let (a, b) = (p.a(), p.b());
        (PI * a.re / a.norm_sqr()).min(PI * b.re / b.norm_sqr())
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.panel_tolerance = tol;
        self
    }

    pub fn with_contour(mut self, contour: Contour) -> Self {
        self.contour = contour;
        self
    }

    fn validate(&self) -> Result<()> {
        let h = Self::lowest_pole_height(&self.params);
        if !(self.contour_offset > 0.0 && self.contour_offset < h) {
            return Err(Error::Domain(format!(
                "contour offset {} must lie in (0, {h})",
                self.contour_offset
            )));
        }
        if let Contour::Indented { radius } = self.contour {
            if !(radius > 0.0 && radius < h) {
                return Err(Error::Domain(format!(
                    "indentation radius {radius} must lie in (0, {h})"
                )));
            }
        }
        if !(self.panel_tolerance > 0.0 && self.truncation > 0.0) {
            return Err(Error::Domain(
                "tolerance and truncation must be positive".into(),
            ));
        }
        Ok(())
    }

    fn strip_limit(&self) -> f64 {
        (1.0 - self.strip_margin) * self.params.strip_half_width()
    }

    /// `1 / (t sinh(at) sinh(bt))`.
    fn denominator_inv(&self, t: Complex64) -> Complex64 {
        let (a, b) = (self.params.a(), self.params.b());
        (t * (a * t).sinh() * (b * t).sinh()).inv()
    }

    /// Truncation point for an integrand whose modulus at `±s` is `env(±s)`
    /// and decays at least like `e^{-κ_± |s|}`.
    fn truncation_for<F: Fn(f64) -> f64>(&self, env: F, kr: f64, kl: f64, tol: f64) -> Result<f64> {
        let kmin = kr.min(kl);
        let mut t = 4.0 / kmin + 2.0;
        loop {
            let tail = (env(t) / kr).max(env(-t) / kl);
            if tail < 0.1 * tol {
                return Ok(t);
            }
            if t > self.truncation {
                return Err(Error::NonConvergence(format!(
                    "tail bound {tail:.3e} still above tolerance at T = {t:.1}"
                )));
            }
            t *= 1.3;
        }
    }

    /// `log γ(z)` by the contour integral, for `z` strictly inside the strip.
    /// Returns the value and an absolute error estimate.
    pub fn log_gamma_integral(&self, z: Complex64) -> Result<(Complex64, f64)> {
        self.validate()?;
        let w = self.params.strip_half_width();
        let kr = w + z.im;
        let kl = w - z.im;
        if kr <= 0.0 || kl <= 0.0 {
            return Err(Error::Domain(format!(
                "z = {z} is outside the strip |Im z| < {w}"
            )));
        }
        let tol = self.panel_tolerance;
        let quad = Quadrature::new(tol, tol);
        match self.contour {
            Contour::Line => {
                // e^{itz} = e^{isz} e^{-δz} on t = s + iδ; the constant is
                // pulled out so that tolerances are relative to the true size
                let d = self.contour_offset;
                let h = |s: f64| {
                    let t = Complex64::new(s, d);
                    (I * s * z).exp() * self.denominator_inv(t)
                };
                let tt = self.truncation_for(|s| h(s).norm(), kr, kl, tol)?;
                let r = quad.integrate(h, -tt, tt, &[0.0, -d, d]);
                let scale = (-d * z).exp() * 0.25;
                let tail = (h(tt).norm() / kr + h(-tt).norm() / kl) * 0.1;
                if !r.converged && r.error > 1e3 * tol.max(tol * r.value.norm()) {
                    return Err(Error::NonConvergence(format!(
                        "line integral error {:.3e} at z = {z}",
                        r.error
                    )));
                }
                let err = (r.error + tail + 1e-16 * r.value.norm()) * scale.norm();
                Ok((r.value * scale, err))
            }
            Contour::Indented { radius } => {
                let f = |t: Complex64| (I * t * z).exp() * self.denominator_inv(t);
                let h = |s: f64| f(Complex64::from(s));
                let tt = self.truncation_for(|s| h(s).norm(), kr, kl, tol)?;
                let left = quad.integrate(h, -tt, -radius, &[]);
                let right = quad.integrate(h, radius, tt, &[]);
                // half circle from -r to r through the upper half plane
                let arc = quad.integrate(
                    |th: f64| {
                        let e = Complex64::from_polar(1.0, th);
                        f(e * radius) * I * e * radius
                    },
                    PI,
                    0.0,
                    &[0.5 * PI],
                );
                let value = (left.value + right.value + arc.value) * 0.25;
                let err = 0.25 * (left.error + right.error + arc.error) + 1e-16 * value.norm();
                Ok((value, err))
            }
        }
    }

    /// `log γ(z)` inside the strip, switching to the inversion formula for
    /// `Re z < 0` with the line contour, where the direct integrand grows.
    /// This is the branch analytic in the strip with `log γ(+∞) = 0`.
    pub fn log_gamma(&self, z: Complex64) -> Result<(Complex64, f64)> {
        if z.re < 0.0 && self.contour == Contour::Line {
            let (l, e) = self.log_gamma_integral(-z)?;
            let p = &self.params;
            let pre = I * p.beta + I * PI * z * z;
            return Ok((pre - l, e + 1e-16 * pre.norm()));
        }
        self.log_gamma_integral(z)
    }

    /// Nearest pole `-ω″ - 2mω - 2nω′`, `m, n >= 0`, and its distance to `z`.
    pub fn nearest_pole(&self, z: Complex64) -> (Complex64, f64) {
        let p = &self.params;
        let (s1, s2) = (2.0 * p.omega, 2.0 * p.omega_prime);
        let reach =
            |s: Complex64| ((z.norm() + p.omega_dprime.norm()) / s.norm()).ceil() as usize + 2;
        let (m_max, n_max) = (reach(s1).min(400), reach(s2).min(400));
        let mut best = (-p.omega_dprime, f64::INFINITY);
        for m in 0..=m_max {
            for n in 0..=n_max {
                let pole = -p.omega_dprime - s1 * m as f64 - s2 * n as f64;
                let d = (z - pole).norm();
                if d < best.1 {
                    best = (pole, d);
                }
            }
        }
        best
    }

    /// γ(z) anywhere away from its poles.
    pub fn gamma(&self, z: Complex64) -> Result<DilogValue> {
        let (l, err) = self.log_gamma_continued(z)?;
        let value = l.exp();
        Ok(DilogValue {
            value,
            est_error: value.norm() * err,
        })
    }

    /// A logarithm of γ(z) anywhere away from its poles; off the strip the
    /// branch is whatever the continuation steps produce. The error is absolute.
    pub fn log_gamma_continued(&self, z: Complex64) -> Result<(Complex64, f64)> {
        self.validate()?;
        let (pole, distance) = self.nearest_pole(z);
        if distance <= self.pole_radius {
            return Err(Error::NearPole { z, pole, distance });
        }
        let p = &self.params;
        let limit = self.strip_limit();
        let mut w = z;
        let mut log_factor = Complex64::new(0.0, 0.0);
        let mut shifts = 0usize;
        let steps = [(p.omega_prime, p.omega), (p.omega, p.omega_prime)];
        while w.im.abs() > limit {
            let down = w.im > 0.0;
            let landing = |(h, _): (Complex64, Complex64)| {
                let s = if down { -2.0 * h } else { 2.0 * h };
                w + s
            };
            let candidates = [landing(steps[0]), landing(steps[1])];
            let pick = if candidates[0].im.abs() <= limit {
                0
            } else if candidates[1].im.abs() <= limit {
                1
            } else if candidates[0].im.abs() <= candidates[1].im.abs() {
                0
            } else {
                1
            };
            if candidates[pick].im.abs() >= w.im.abs() {
                return Err(Error::NonConvergence(format!(
                    "continuation of z = {z} makes no progress"
                )));
            }
            let (h, other) = steps[pick];
            // γ(w) = γ(w - 2h)(1 + e^{-iπ(w-h)/h̃}),  γ(w) = γ(w + 2h)/(1 + e^{-iπ(w+h)/h̃})
            if down {
                log_factor += one_plus_exp(-I * PI * (w - h) / other).ln();
            } else {
                log_factor -= one_plus_exp(-I * PI * (w + h) / other).ln();
            }
            w = candidates[pick];
            shifts += 1;
            if shifts > 10_000 {
                return Err(Error::NonConvergence("too many continuation steps".into()));
            }
        }
        let (l, err) = self.log_gamma(w)?;
        Ok((l + log_factor, err + 4e-16 * shifts as f64))
    }

    /// Θ(u) = γ(z) with `z = -(ω / iπ) Log u`.
    pub fn theta(&self, u: Complex64) -> Result<DilogValue> {
        if u == Complex64::new(0.0, 0.0) {
            return Ok(DilogValue {
                value: Complex64::new(1.0, 0.0),
                est_error: 0.0,
            });
        }
        if u.im == 0.0 && u.re < 0.0 {
            return Err(Error::BranchCut(u));
        }
        let z = -(self.params.omega / (I * PI)) * u.ln();
        self.gamma(z)
    }
}

pub fn gamma(z: Complex64, ev: &GammaEvaluator) -> Result<DilogValue> {
    ev.gamma(z)
}

pub fn theta(u: Complex64, params: &ModularParameter) -> Result<DilogValue> {
    GammaEvaluator::new(*params).theta(u)
}

/// Θ(u) as the ratio `∏(1 + q^{2n+1} u) / ∏(1 + q̃^{2n+1} ũ)` with
/// `ũ = exp(Log u / τ)`; needs `Im τ > 0`.
pub fn theta_product(u: Complex64, params: &ModularParameter) -> Result<DilogValue> {
    if !(params.tau.im > 0.0) {
        return Err(Error::InvalidTau {
            tau: params.tau,
            reason: "the product form needs Im tau > 0",
        });
    }
    if u == Complex64::new(0.0, 0.0) {
        return Ok(DilogValue {
            value: Complex64::new(1.0, 0.0),
            est_error: 0.0,
        });
    }
    let u_tilde = (u.ln() / params.tau).exp();
    let (num, e1) = q_product(u, params.q)?;
    let (den, e2) = q_product(u_tilde, params.q_tilde)?;
    let value = num / den;
    Ok(DilogValue {
        value,
        est_error: value.norm() * (e1 + e2),
    })
}

/// `∏_{n>=0} (1 + q^{2n+1} x)` for `|q| < 1`, with a relative error bound.
pub fn q_product(x: Complex64, q: Complex64) -> Result<(Complex64, f64)> {
    let r = q.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("|q| = {r} is not below 1")));
    }
    let q2 = q * q;
    let mut power = q * x;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut n = 0usize;
    loop {
        acc *= 1.0 + power;
        power *= q2;
        n += 1;
        // the remaining factors deviate from 1 by at most |power| / (1 - |q|²) in total
        let rest = power.norm() / (1.0 - r * r);
        if rest < 1e-17 {
            return Ok((acc, 2e-16 * n as f64 + rest));
        }
        if n > 1_000_000 {
            return Err(Error::NonConvergence(format!("q-product with |q| = {r}")));
        }
    }
}

/// Coefficients `q^{n(n-1)/2} / ∏_{k<=n}(q^{-k} - q^k)` for `n = 0..=order`.
pub fn q_exponential_coefficients(q: Complex64, order: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(order + 1);
    let mut coeff = Complex64::new(1.0, 0.0);
    out.push(coeff);
    for n in 1..=order {
        let qn = q.powu(n as u32);
        if (qn * qn - 1.0).norm() < 1e-14 {
            return Err(Error::RootOfUnity(n));
        }
        coeff *= q.powu(n as u32 - 1) / (qn.inv() - qn);
        out.push(coeff);
    }
    Ok(out)
}

/// Partial sum through `x^order` of `Σ q^{n(n-1)/2} xⁿ / ∏_{k<=n}(q^{-k} - q^k)`.
pub fn q_exponential(x: Complex64, q: Complex64, order: usize) -> Result<Complex64> {
    let coeffs = q_exponential_coefficients(q, order)?;
    // Horner in x
    Ok(coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c))
}

/// Coefficients of the leading terms at the zero `ω″` and the pole `-ω″`,
/// obtained by Richardson extrapolation in the offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueFit {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c1_rel_error: f64,
    pub c2_rel_error: f64,
    /// `|-c1 c2 - c²| / |c²|`.
    pub product_rel_error: f64,
    pub levels: usize,
}

fn richardson<F: Fn(f64) -> Result<Complex64>>(
    f: F,
    eps0: f64,
    levels: usize,
) -> Result<(Complex64, usize)> {
    let mut table: Vec<Vec<Complex64>> = Vec::new();
    let mut best: Option<(Complex64, f64, usize)> = None;
    for k in 0..levels {
        let eps = eps0 / f64::powi(2.0, k as i32);
        let mut row = vec![f(eps)?];
        for j in 1..=k {
            let p = f64::powi(2.0, j as i32);
            let v = (row[j - 1] * p - table[k - 1][j - 1]) / (p - 1.0);
            row.push(v);
        }
        if k > 0 {
            let change = (row[k] - table[k - 1][k - 1]).norm();
            if best.is_none_or(|b| change < b.1) {
                best = Some((row[k], change, k + 1));
            }
        }
        table.push(row);
    }
    match best {
        Some((v, change, used)) if change <= 1e-8 * v.norm() => Ok((v, used)),
        Some((v, change, _)) => Err(Error::Extrapolation(format!(
            "Richardson table settled only to {:.3e}",
            change / v.norm()
        ))),
        None => Err(Error::Extrapolation("need at least two levels".into())),
    }
}

pub fn residue_fit(params: &ModularParameter) -> Result<ResidueFit> {
    let ev = GammaEvaluator::new(*params);
    let wpp = params.omega_dprime;
    let eps0 = 0.05 * wpp.norm();
    let (c1, l1) = richardson(|e| Ok(ev.gamma(wpp + e)?.value / e), eps0, 8)?;
    let (c2, l2) = richardson(|e| Ok(ev.gamma(-wpp + e)?.value * e), eps0, 8)?;
    let c_sq = params.c * params.c;
    Ok(ResidueFit {
        c1,
        c2,
        c1_rel_error: rel_diff(c1, params.c1),
        c2_rel_error: rel_diff(c2, params.c2),
        product_rel_error: (-c1 * c2 - c_sq).norm() / c_sq.norm(),
        levels: l1.max(l2),
    })
}

/// Checks the leading coefficients at the zero `ω″` and the pole `-ω″`.
/// The residual is the larger relative error of the two fitted coefficients.
pub fn residue_check(params: &ModularParameter) -> VerificationReport {
    let started = Instant::now();
    let base = VerificationReport::new(
        "gamma-properties",
        "zero and pole coefficients",
        f64::NAN,
        1e-6,
    );
    let report = match residue_fit(params) {
        Ok(fit) => base
            .with_residual(fit.c1_rel_error.max(fit.c2_rel_error))
            .param("c1_re", fit.c1.re)
            .param("c1_im", fit.c1.im)
            .param("c2_re", fit.c2.re)
            .param("c2_im", fit.c2.im)
            .param("product_rel_error", fit.product_rel_error)
            .note(
                "method",
                "Richardson extrapolation over halved real offsets",
            )
            .note("levels", fit.levels),
        Err(e) => base.note("error", e),
    };
    report.tau(params.tau).timed(started)
}

/// Real sample grid and tolerances for [`property_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
    pub tolerance: f64,
    /// Point at which `|γ(z) - 1|` is checked.
    pub asymptotic_z: f64,
    pub asymptotic_tolerance: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            z_min: -5.0,
            z_max: 5.0,
            points: 201,
            tolerance: 1e-8,
            asymptotic_z: 5.0,
            asymptotic_tolerance: 1e-6,
        }
    }
}

impl SampleSpec {
    pub fn grid(&self) -> Vec<f64> {
        if self.points < 2 {
            return vec![self.z_min];
        }
        let h = (self.z_max - self.z_min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|j| self.z_min + h * j as f64)
            .collect()
    }
}

fn sample_residuals<F>(zs: &[f64], f: F) -> (f64, Option<String>)
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let values: Vec<Result<f64>> = zs.par_iter().map(|&z| f(z)).collect();
    let mut first_error = None;
    let r = max_residual(values.into_iter().map(|v| match v {
        Ok(x) => x,
        Err(e) => {
            first_error.get_or_insert(e.to_string());
            f64::NAN
        }
    }));
    (r, first_error)
}

fn finish(report: VerificationReport, err: Option<String>, started: Instant) -> VerificationReport {
    let report = match err {
        Some(e) => report.note("error", e),
        None => report,
    };
    report.timed(started)
}

/// Pointwise checks of the functional equation, the inversion formula,
/// unitarity, the decay at `+∞` and the Θ shift relation.
pub fn property_suite(params: &ModularParameter, spec: &SampleSpec) -> Vec<VerificationReport> {
    let ev = GammaEvaluator::new(*params);
    let zs = spec.grid();
    let p = *params;
    let mut out = Vec::new();

    let started = Instant::now();
    let (r, e) = sample_residuals(&zs, |x| {
        let z = Complex64::from(x);
        let lhs = ev.gamma(z + p.omega_prime)?.value / ev.gamma(z - p.omega_prime)?.value;
        let rhs = 1.0 + (-I * PI * z / p.omega).exp();
        Ok(rel_diff(lhs, rhs))
    });
    out.push(finish(
        VerificationReport::new(
            "gamma-properties",
            "functional equation (omega' shift)",
            r,
            spec.tolerance,
        )
        .tau(p.tau)
        .param("points", zs.len() as f64)
        .note("residual", "relative, max over the real grid"),
        e,
        started,
    ));

    let started = Instant::now();
    let (r, e) = sample_residuals(&zs, |x| {
        let z = Complex64::from(x);
        let lhs = ev.gamma(z + p.omega)?.value / ev.gamma(z - p.omega)?.value;
        let rhs = 1.0 + (-I * PI * z / p.omega_prime).exp();
        Ok(rel_diff(lhs, rhs))
    });
    out.push(finish(
        VerificationReport::new(
            "gamma-properties",
            "functional equation (omega shift)",
            r,
            spec.tolerance,
        )
        .tau(p.tau)
        .param("points", zs.len() as f64)
        .note("residual", "relative, max over the real grid"),
        e,
        started,
    ));

    // both factors from the indented real-axis contour, never from the
    // inversion formula itself
    let started = Instant::now();
    let radius = 0.25 * GammaEvaluator::lowest_pole_height(&p).min(2.0);
    let direct = ev.with_contour(Contour::Indented { radius });
    let (r, e) = sample_residuals(&zs, |x| {
        let z = Complex64::from(x);
        let lhs = direct.gamma(z)?.value * direct.gamma(-z)?.value;
        let rhs = (I * p.beta + I * PI * z * z).exp();
        Ok((lhs - rhs).norm())
    });
    out.push(finish(
        VerificationReport::new("gamma-properties", "inversion formula", r, spec.tolerance)
            .tau(p.tau)
            .param("points", zs.len() as f64)
            .note(
                "contour",
                format!("real axis indented above 0, radius {radius:.4}"),
            ),
        e,
        started,
    ));

    if p.is_real() {
        let started = Instant::now();
        let (r, e) = sample_residuals(&zs, |x| {
            Ok((ev.gamma(Complex64::from(x))?.value.norm() - 1.0).abs())
        });
        out.push(finish(
            VerificationReport::new(
                "gamma-properties",
                "unitarity on the real line",
                r,
                spec.tolerance,
            )
            .tau(p.tau)
            .param("points", zs.len() as f64),
            e,
            started,
        ));
    }

    let started = Instant::now();
    let za = spec.asymptotic_z;
    let probe = [0.5 * za, za];
    let vals: Vec<Result<f64>> = probe
        .iter()
        .map(|&x| Ok((ev.gamma(Complex64::from(x))?.value - 1.0).norm()))
        .collect();
    let report = VerificationReport::new(
        "gamma-properties",
        "decay to 1 at large positive z",
        f64::NAN,
        spec.asymptotic_tolerance,
    )
    .tau(p.tau)
    .param("z", za);
    let report = match (&vals[0], &vals[1]) {
        (Ok(half), Ok(full)) => {
            let report = report.param("deviation_half_z", *half).with_residual(*full);
            if full > half && *half > 1e-300 {
                report
                    .with_residual(f64::NAN)
                    .note("error", "deviation grows with z")
            } else {
                report
            }
        }
        (Err(e), _) | (_, Err(e)) => report.note("error", e),
    };
    out.push(report.timed(started));

    // Θ(qu)/Θ(q⁻¹u) = 1/(1+u); a wrong sign in e^{-iπz/ω} would fail here.
    // On the principal sheet this needs Log(q^{±1}u) = ±iπτ + Log u.
    let u = Complex64::from(0.5);
    let on_sheet = |w: Complex64| {
        ((p.q * w).ln() - I * PI * p.tau - w.ln()).norm() < 1e-12
            && ((w / p.q).ln() + I * PI * p.tau - w.ln()).norm() < 1e-12
    };
    if !on_sheet(u) {
        return out;
    }
    let started = Instant::now();
    let res = (|| -> Result<f64> {
        let lhs = ev.theta(p.q * u)?.value / ev.theta(u / p.q)?.value;
        Ok(rel_diff(lhs, 1.0 / (1.0 + u)))
    })();
    let report = VerificationReport::new(
        "gamma-properties",
        "theta shift relation",
        f64::NAN,
        spec.tolerance,
    )
    .tau(p.tau)
    .param("u", u.re);
    let report = match res {
        Ok(r) => report.with_residual(r),
        Err(e) => report.note("error", e),
    };
    out.push(report.timed(started));

    out
}

/// `γ(0) = e^{iβ/2}`, with γ(0) taken from the line integral.
pub fn origin_check(params: &ModularParameter) -> VerificationReport {
    let started = Instant::now();
    let base = VerificationReport::new(
        "gamma-properties",
        "value at the origin e^{i beta/2}",
        f64::NAN,
        1e-10,
    )
    .tau(params.tau);
    let expected = (I * params.beta / 2.0).exp();
    match GammaEvaluator::new(*params).gamma(Complex64::new(0.0, 0.0)) {
        Ok(g) => base
            .with_residual((g.value - expected).norm())
            .param("value_re", g.value.re)
            .param("value_im", g.value.im),
        Err(e) => base.note("error", e),
    }
    .timed(started)
}

/// Θ from the product form against Θ from γ at `points` values of u drawn
/// from the seeded generator: |u| log-uniform in [0.05, 3], |arg u| < 0.9π.
pub fn cross_representation_check(
    params: &ModularParameter,
    points: usize,
    seed: u64,
) -> VerificationReport {
    let started = Instant::now();
    let base = VerificationReport::new(
        "gamma-properties",
        "theta product form against the gamma integral",
        f64::NAN,
        1e-8,
    )
    .tau(params.tau)
    .param("points", points as f64)
    .param("seed", seed as f64);
    let mut rng = crate::sample::Lcg::new(seed);
    let us: Vec<Complex64> = (0..points)
        .map(|_| {
            let r = rng.log_uniform(0.05, 3.0);
            let t = rng.range(-0.9 * PI, 0.9 * PI);
            Complex64::from_polar(r, t)
        })
        .collect();
    let ev = GammaEvaluator::new(*params);
    let mut errors = Vec::new();
    let mut first_error = None;
    for &u in &us {
        match (theta_product(u, params), ev.theta(u)) {
            (Ok(a), Ok(b)) => errors.push((a.value - b.value).norm() / b.value.norm().max(1.0)),
            (Err(e), _) | (_, Err(e)) => {
                errors.push(f64::NAN);
                first_error.get_or_insert(e);
            }
        }
    }
    let report = base.with_residual(max_residual(errors));
    match first_error {
        Some(e) => report.note("error", e),
        None => report,
    }
    .timed(started)
}
