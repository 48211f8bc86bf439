//! Small complex helpers that need more care than the obvious formula.

use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let (s, c) = z.im.sin_cos();
    let em1 = z.re.exp_m1();
    let half = (0.5 * z.im).sin();
    Complex64::new(em1 * c - 2.0 * half * half, (em1 + 1.0) * s)
}

/// `1 + e^w`, accurate near its zeros `w = iπ(2k+1)`.
pub fn one_plus_exp(w: Complex64) -> Complex64 {
    let k = ((w.im / PI - 1.0) / 2.0).round();
    let shifted = w - I * (PI * (2.0 * k + 1.0));
    -expm1(shifted)
}

/// `ln(1 + e^x)` for real `x` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub(crate) fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm1_small_and_large() {
        let z = Complex64::new(1e-9, -2e-9);
        let e = expm1(z);
        assert!(
            (e - z - z * z / 2.0).norm() < 1e-24,
            "{}",
            (e - z - z * z / 2.0).norm()
        );
        let z = Complex64::new(0.7, 2.0);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
        let z = Complex64::new(-0.3, 0.4);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn one_plus_exp_near_zero() {
        let eps = Complex64::new(1e-10, 3e-11);
        let w = I * (3.0 * PI) + eps;
        // 1 + e^{3πi + ε} = 1 - e^{ε} ≈ -ε, up to the rounding of 3π in w
        assert!((one_plus_exp(w) + eps).norm() < 5e-15);
        let w = Complex64::new(0.2, -1.1);
        assert!((one_plus_exp(w) - (1.0 + w.exp())).norm() < 1e-15);
    }

    #[test]
    fn softplus_matches_direct() {
        for x in [-40.0, -3.0, 0.0, 2.5, 40.0, 800.0] {
            let direct = (1.0 + f64::exp(x)).ln();
            if direct.is_finite() {
                assert!((softplus(x) - direct).abs() < 1e-14 * direct.abs().max(1.0));
            } else {
                assert_eq!(softplus(x), 800.0);
            }
        }
    }
}
