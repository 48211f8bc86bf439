//! Double-double complex exponentials and a radix-2 FFT, used for the
//! unbounded multipliers U and V where round-off in f64 would be amplified by
//! factors up to e^{2π|z|}.

use num_complex::Complex;
use twofloat::{consts, TwoFloat};

pub(crate) type Cdd = Complex<TwoFloat>;

pub(crate) fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

pub(crate) fn cdd(z: num_complex::Complex64) -> Cdd {
    Complex::new(dd(z.re), dd(z.im))
}

pub(crate) fn to_c64(z: Cdd) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

/// `a / b` by three steps of long division. `TwoFloat / TwoFloat` in twofloat
/// 0.8 forms the residual `1 - b·(1/b)` without FMA and returns an
/// f64-accurate quotient; division by an f64 is unaffected.
pub(crate) fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

pub(crate) fn magnitude(z: &Cdd) -> f64 {
    (z.re.hi() + z.re.lo()).hypot(z.im.hi() + z.im.lo())
}

/// `e^x` to ~1e-31 relative for |x| below the f64 range.
pub(crate) fn exp_dd(x: TwoFloat) -> TwoFloat {
    if x.hi() < -745.0 {
        return dd(0.0);
    }
    if x.hi() > 709.0 {
        return dd(f64::INFINITY);
    }
    let k = (x.hi() / std::f64::consts::LN_2).round();
    let s = (x - consts::LN_2 * dd(k)) / 256.0;
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    for n in 1..16 {
        term = term * s / n as f64;
        sum += term;
    }
    for _ in 0..8 {
        sum = sum * sum;
    }
    // 2^k in two steps so that k near the range limit does not overflow
    let half = (k / 2.0).trunc();
    sum * dd(2f64.powi(half as i32)) * dd(2f64.powi((k - half) as i32))
}

/// `e^{iπt}`.
pub(crate) fn cis_pi(t: TwoFloat) -> Cdd {
    let r = t.rem_euclid(dd(2.0));
    let m = (2.0 * (r.hi() + r.lo())).round();
    let theta = consts::PI * (r - dd(m / 2.0));
    let t2 = theta * theta;
    let (mut c, mut s) = (dd(1.0), theta);
    let (mut tc, mut ts) = (dd(1.0), theta);
    for n in 1..20 {
        let k = 2.0 * n as f64;
        tc = -tc * t2 / ((k - 1.0) * k);
        ts = -ts * t2 / (k * (k + 1.0));
        c += tc;
        s += ts;
    }
    let base = Complex::new(c, s);
    match (m as i64).rem_euclid(4) {
        0 => base,
        1 => Complex::new(-base.im, base.re),
        2 => -base,
        _ => Complex::new(base.im, -base.re),
    }
}

/// `e^w` for complex `w`.
pub(crate) fn exp_cdd(w: Cdd) -> Cdd {
    cis_pi(w.im * consts::FRAC_1_PI) * exp_dd(w.re)
}

/// Unnormalised forward transform `Σ_j a_j e^{-2πijk/N}`.
pub(crate) struct DdFft {
    n: usize,
    twiddles: Vec<Cdd>,
}

impl DdFft {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n.is_power_of_two());
        let twiddles = (0..n / 2)
            .map(|k| cis_pi(dd(-2.0 * k as f64) / n as f64))
            .collect();
        Self { n, twiddles }
    }

    pub(crate) fn forward(&self, a: &mut [Cdd]) {
        let n = self.n;
        let bits = n.trailing_zeros();
        if bits > 0 {
            for i in 0..n {
                let j = i.reverse_bits() >> (usize::BITS - bits);
                if i < j {
                    a.swap(i, j);
                }
            }
        }
        let mut len = 2;
        while len <= n {
            let step = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let u = a[start + k];
                    let v = a[start + k + len / 2] * self.twiddles[k * step];
                    a[start + k] = u + v;
                    a[start + k + len / 2] = u - v;
                }
            }
            len <<= 1;
        }
    }

    /// Unnormalised inverse.
    pub(crate) fn inverse(&self, a: &mut [Cdd]) {
        for v in a.iter_mut() {
            *v = v.conj();
        }
        self.forward(a);
        for v in a.iter_mut() {
            *v = v.conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponentials_beyond_double_precision() {
        // e^1 and e^{-30} against their digits
        let e = exp_dd(dd(1.0));
        let err = (e - consts::E).abs();
        assert!(err.hi() < 1e-30, "{err:?}");
        let a = exp_dd(dd(-30.0)) * exp_dd(dd(30.0));
        assert!((a - dd(1.0)).abs().hi() < 1e-30);
        let c = cis_pi(dd(0.25));
        let h = consts::FRAC_1_SQRT_2;
        assert!((c.re - h).abs().hi() < 1e-31 && (c.im - h).abs().hi() < 1e-31);
        let w = cis_pi(dd_div(dd(1.0), dd(3.0)));
        assert!((w.re - dd(0.5)).abs().hi() < 1e-31);
    }

    #[test]
    fn long_division_is_double_double() {
        let third = dd_div(dd(1.0), dd(3.0));
        assert!((third * 3.0 - dd(1.0)).abs().hi() < 1e-31);
        let x = dd_div(consts::PI, consts::E);
        assert!((x * consts::E - consts::PI).abs().hi() < 1e-30);
    }

    #[test]
    fn fft_round_trip_and_delta() {
        let n = 64;
        let plan = DdFft::new(n);
        let mut a: Vec<Cdd> = (0..n)
            .map(|j| cdd(num_complex::Complex64::new(j as f64, -(j as f64).sqrt())))
            .collect();
        let orig = a.clone();
        plan.forward(&mut a);
        plan.inverse(&mut a);
        for (x, y) in a.iter().zip(&orig) {
            let d = *x * dd(1.0 / n as f64) - *y;
            assert!(magnitude(&d) < 1e-27);
        }
        let mut delta = vec![cdd(0.0.into()); n];
        delta[1] = cdd(1.0.into());
        plan.forward(&mut delta);
        for (k, v) in delta.iter().enumerate() {
            let w = cis_pi(dd(-2.0 * k as f64) / n as f64);
            assert!(magnitude(&(*v - w)) < 1e-30);
        }
    }
}
