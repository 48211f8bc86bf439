//! Euler's dilogarithm on the principal sheet, with the Rogers forms `L`
//! and `R` built on top of it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZETA2: f64 = PI * PI / 6.0;

/// `B_{2k} / (2k+1)!` for k = 1..18.
const BERNOULLI_OVER_FACTORIAL: [f64; 18] = [
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
];

/// Bernoulli series in `w = -log(1 - u)`; used for `|u| <= 1`, `Re u <= 1/2`.
fn li2_core(u: Complex64) -> Complex64 {
    let w = -(Complex64::new(1.0, 0.0) - u).ln();
    let w2 = w * w;
    let mut sum = w - 0.25 * w2;
    let mut power = w * w2;
    for &c in &BERNOULLI_OVER_FACTORIAL {
        let term = power * c;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        power *= w2;
    }
    sum
}

/// `Li₂(u) = Σ uⁿ/n²`, continued to ℂ with the cut on `[1, ∞)`.
///
/// On the cut itself the value attached to `Log(-u)` with `arg(-u) = ±π`
/// is returned (the limit from below the axis).
pub fn euler_dilog(u: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if u == Complex64::new(0.0, 0.0) {
        return u;
    }
    if u == one {
        return Complex64::from(ZETA2);
    }
    if u.norm() > 1.0 {
        let log_neg = (-u).ln();
        return -euler_dilog(u.inv()) - ZETA2 - 0.5 * log_neg * log_neg;
    }
    if u.re > 0.5 {
        let v = one - u;
        return ZETA2 - u.ln() * v.ln() - li2_core(v);
    }
    li2_core(u)
}

/// `E(u) = Li₂(-u)`.
#[allow(non_snake_case)]
pub fn euler_E(u: Complex64) -> Complex64 {
    euler_dilog(-u)
}

/// Rogers' dilogarithm `L(x) = Li₂(x) + ½ ln x ln(1-x)` on `[0, 1]`.
#[allow(non_snake_case)]
pub fn rogers_L(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "rogers_L needs 0 <= x <= 1, got {x}"
        )));
    }
    Ok(rogers_l_unchecked(x))
}

fn rogers_l_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return ZETA2;
    }
    if x > 0.5 {
        // L(x) + L(1-x) = π²/6
        return ZETA2 - rogers_l_unchecked(1.0 - x);
    }
    euler_dilog(Complex64::from(x)).re + 0.5 * x.ln() * (-x).ln_1p()
}

/// `R(u) = L(u / (1 + u))` for `u >= 0`.
#[allow(non_snake_case)]
pub fn rogers_R(u: f64) -> Result<f64> {
    if !(u >= 0.0) || u.is_infinite() {
        return Err(Error::Domain(format!(
            "rogers_R needs finite u >= 0, got {u}"
        )));
    }
    if u > 1.0 {
        // 1 - u/(1+u) = 1/(1+u) is formed directly to keep its digits
        return Ok(ZETA2 - rogers_l_unchecked(1.0 / (1.0 + u)));
    }
    Ok(rogers_l_unchecked(u / (1.0 + u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct power series, used as an oracle inside the unit disc.
    fn li2_series(u: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut p = u;
        for n in 1..20000 {
            let t = p / (n * n) as f64;
            sum += t;
            if t.norm() < 1e-18 {
                break;
            }
            p *= u;
        }
        sum
    }

    #[test]
    fn special_values() {
        assert_eq!(
            euler_dilog(Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        assert!((euler_dilog(Complex64::from(1.0)).re - ZETA2).abs() < 1e-15);
        assert!((euler_dilog(Complex64::from(-1.0)).re + PI * PI / 12.0).abs() < 1e-15);
        // Li₂(1/2) = π²/12 − ln²2 / 2
        let half = PI * PI / 12.0 - 0.5 * std::f64::consts::LN_2.powi(2);
        assert!((euler_dilog(Complex64::from(0.5)).re - half).abs() < 1e-15);
        assert_eq!(euler_E(Complex64::new(0.0, 0.0)).norm(), 0.0);
        assert!((euler_E(Complex64::from(1.0)).re + PI * PI / 12.0).abs() < 1e-15);
    }

    #[test]
    fn matches_series_in_disc() {
        for &(re, im) in &[
            (0.3, 0.2),
            (-0.6, 0.5),
            (0.7, -0.6),
            (0.1, 0.9),
            (-0.95, 0.0),
        ] {
            let u = Complex64::new(re, im);
            assert!((euler_dilog(u) - li2_series(u)).norm() < 1e-14, "{u}");
        }
    }

    #[test]
    fn inversion_relation_off_cut() {
        // Li₂(u) + Li₂(1/u) = −π²/6 − ½ Log²(−u)
        for &(re, im) in &[(3.0, 1.0), (-4.0, -0.5), (0.2, 5.0)] {
            let u = Complex64::new(re, im);
            let l = (-u).ln();
            let lhs = euler_dilog(u) + euler_dilog(u.inv());
            assert!((lhs + ZETA2 + 0.5 * l * l).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_e_along_exponential() {
        // d/dp E(e^p) = −ln(1 + e^p), checked by central differences
        for p in [-3.0, -0.4, 0.0, 1.2, 4.0] {
            let h = 1e-5;
            let e = |p: f64| euler_E(Complex64::from(f64::exp(p))).re;
            let fd = (e(p + h) - e(p - h)) / (2.0 * h);
            assert!((fd + p.exp().ln_1p()).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn rogers_endpoints_and_domain() {
        assert_eq!(rogers_L(0.0).unwrap(), 0.0);
        assert!((rogers_L(1.0).unwrap() - ZETA2).abs() < 1e-15);
        assert!(rogers_L(-0.1).is_err());
        assert!(rogers_L(1.1).is_err());
        assert!(rogers_R(-1.0).is_err());
        assert!(rogers_R(f64::NAN).is_err());
        assert_eq!(rogers_R(0.0).unwrap(), 0.0);
    }

    #[test]
    fn rogers_r_identities() {
        for u in [1.0f64, 2.0, 0.5, 17.0, 0.013] {
            let r = rogers_R(u).unwrap();
            let e = euler_E(Complex64::from(u)).re;
            assert!((r + e + 0.5 * u.ln() * u.ln_1p()).abs() < 1e-12, "u = {u}");
            assert!(
                (ZETA2 - r - rogers_R(1.0 / u).unwrap()).abs() < 1e-13,
                "u = {u}"
            );
        }
    }
}
