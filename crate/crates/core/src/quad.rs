//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex-valued
//! integrands, on real intervals, straight segments and rays in ℂ.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    fn absorb(&mut self, other: QuadResult) {
        self.value += other.value;
        self.error += other.error;
        self.evaluations += other.evaluations;
        self.converged &= other.converged;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_intervals: 4000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let kron = kron * half;
    let gauss = gauss * half;
    let err = (kron - gauss).norm();
    let err = if err.is_finite() { err } else { f64::INFINITY };
    (kron, err)
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[a, b]`, starting from the panels cut at the
    /// interior `breakpoints` (ignored if outside the interval).
    pub fn integrate<F: Fn(f64) -> Complex64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
    ) -> QuadResult {
        if a == b {
            return QuadResult::zero();
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut cuts: Vec<f64> = vec![lo];
        let mut inner: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&p| p > lo && p < hi)
            .collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(hi);

        let mut heap = BinaryHeap::new();
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_err = 0.0;
        for w in cuts.windows(2) {
            let (v, e) = kronrod(&f, w[0], w[1]);
            total += v;
            total_err += e;
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value: v,
                error: e,
            });
        }
        let mut evaluations = 15 * heap.len();
        let mut converged = false;
        while heap.len() < self.max_intervals {
            let target = self.abs_tol.max(self.rel_tol * total.norm());
            if total_err <= target {
                converged = true;
                break;
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval cannot be split further in floating point
                heap.push(worst);
                break;
            }
            let (v1, e1) = kronrod(&f, worst.a, mid);
            let (v2, e2) = kronrod(&f, mid, worst.b);
            evaluations += 30;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: v1,
                error: e1,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: v2,
                error: e2,
            });
        }
        if !converged {
            // resum to shed the drift of the running totals
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
            converged = total_err <= self.abs_tol.max(self.rel_tol * total.norm());
        }
        QuadResult {
            value: total * sign,
            error: total_err,
            evaluations,
            converged,
        }
    }

    /// Integrates an analytic `f` along the straight segment `from → to`.
    pub fn segment<F: Fn(Complex64) -> Complex64>(
        &self,
        f: F,
        from: Complex64,
        to: Complex64,
        breakpoints: &[f64],
    ) -> QuadResult {
        let d = to - from;
        self.integrate(|s| f(from + d * s) * d, 0.0, 1.0, breakpoints)
    }

    /// Integrates along the ray `origin + r·direction`, `r ≥ 0`, panel by
    /// panel until two consecutive panels fall below the absolute tolerance,
    /// or `max_length` is reached.
    pub fn ray<F: Fn(Complex64) -> Complex64>(
        &self,
        f: F,
        origin: Complex64,
        direction: Complex64,
        panel: f64,
        max_length: f64,
    ) -> QuadResult {
        let dir = direction / direction.norm();
        let mut acc = QuadResult::zero();
        let mut quiet = 0;
        let mut start = 0.0;
        let panel_quad = Quadrature {
            abs_tol: self.abs_tol * 0.1,
            ..*self
        };
        while start < max_length {
            let end = (start + panel).min(max_length);
            let r = panel_quad.integrate(|s| f(origin + dir * s) * dir, start, end, &[]);
            let small = r.value.norm() + r.error < self.abs_tol * 0.1;
            acc.absorb(r);
            quiet = if small { quiet + 1 } else { 0 };
            if quiet >= 2 {
                return acc;
            }
            start = end;
        }
        acc.converged = false;
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let q = Quadrature::default();
        let r = q.integrate(|x| Complex64::new(x * x * x - 2.0 * x, x), -1.0, 2.0, &[]);
        let exact = Complex64::new(15.0 / 4.0 - 3.0, 1.5);
        assert!((r.value - exact).norm() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = Quadrature::default();
        let a = q.integrate(|x| Complex64::from(x.exp()), 0.0, 1.0, &[]);
        let b = q.integrate(|x| Complex64::from(x.exp()), 1.0, 0.0, &[]);
        assert!((a.value + b.value).norm() < 1e-15);
    }

    #[test]
    fn near_pole_lorentzian() {
        // ∫_{-1}^{1} ε/(x²+ε²) dx = 2 atan(1/ε)
        let eps = 1e-4;
        let q = Quadrature::new(1e-12, 1e-12);
        let r = q.integrate(
            |x| Complex64::from(eps / (x * x + eps * eps)),
            -1.0,
            1.0,
            &[0.0],
        );
        assert!((r.value.re - 2.0 * (1.0 / eps).atan()).abs() < 1e-10);
    }

    #[test]
    fn segment_matches_closed_form() {
        // ∫ e^{t} along 0 → 1+i equals e^{1+i} - 1
        let q = Quadrature::default();
        let to = Complex64::new(1.0, 1.0);
        let r = q.segment(|t| t.exp(), Complex64::new(0.0, 0.0), to, &[]);
        assert!((r.value - (to.exp() - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn ray_gaussian() {
        let q = Quadrature::new(1e-14, 1e-14);
        let r = q.ray(
            |t| (-t * t).exp(),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            1.0,
            50.0,
        );
        assert!((r.value.re - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!(r.converged);
    }
}
