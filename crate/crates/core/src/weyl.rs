//! Truncated Laurent polynomials in a Weyl pair `UV = q² VU`, stored in the
//! normal order `Uᵃ Vᵇ`.
//!
//! Coefficients are kept in double-double precision: in this basis the
//! reordering factors `q^{-2bc}` grow quickly for `|q| < 1`, and identities
//! such as Volkov's cancel terms many orders larger than the result.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::{Complex, Complex64};
use twofloat::TwoFloat;

use crate::ddfft::dd_div;

use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub const DEFAULT_MAX_DEGREE: u32 = 12;

type Cdd = Complex<TwoFloat>;

fn dd(c: Complex64) -> Cdd {
    Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
}

fn to_f64(c: Cdd) -> Complex64 {
    Complex64::new(f64::from(c.re), f64::from(c.im))
}

fn dd_zero() -> Cdd {
    dd(Complex64::new(0.0, 0.0))
}

fn dd_one() -> Cdd {
    dd(Complex64::new(1.0, 0.0))
}

fn is_zero(c: &Cdd) -> bool {
    c.re == TwoFloat::from(0.0) && c.im == TwoFloat::from(0.0)
}

fn dd_inv(c: Cdd) -> Cdd {
    let n = c.re * c.re + c.im * c.im;
    Complex::new(dd_div(c.re, n), -dd_div(c.im, n))
}

/// `q^k` for any integer `k`, by repeated squaring.
fn dd_powi(q: Cdd, k: i32) -> Cdd {
    let base = if k < 0 { dd_inv(q) } else { q };
    let mut e = k.unsigned_abs();
    let mut acc = dd_one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b = b * b;
        e >>= 1;
    }
    acc
}

/// q-exponential coefficients `cₙ`, `n = 0..=order`, in double-double.
fn q_exp_coefficients_dd(q: Complex64, order: usize) -> Result<Vec<Cdd>> {
    let qd = dd(q);
    let mut out = vec![dd_one()];
    let mut c = dd_one();
    for n in 1..=order {
        let qn = dd_powi(qd, n as i32);
        if (to_f64(qn * qn) - 1.0).norm() < 1e-14 {
            return Err(Error::RootOfUnity(n));
        }
        c = c * dd_powi(qd, n as i32 - 1) * dd_inv(dd_inv(qn) - qn);
        out.push(c);
    }
    Ok(out)
}

/// `Σ c_{ab} Uᵃ Vᵇ` with `|a| + |b| <= max_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylElement {
    coeffs: BTreeMap<(i32, i32), Cdd>,
    pub max_degree: u32,
    pub q: Complex64,
}

fn degree(&(a, b): &(i32, i32)) -> u32 {
    a.unsigned_abs() + b.unsigned_abs()
}

impl WeylElement {
    pub fn zero(q: Complex64, max_degree: u32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            max_degree,
            q,
        }
    }

    pub fn scalar(c: Complex64, q: Complex64, max_degree: u32) -> Self {
        Self::monomial(0, 0, c, q, max_degree)
    }

    pub fn one(q: Complex64, max_degree: u32) -> Self {
        Self::scalar(Complex64::new(1.0, 0.0), q, max_degree)
    }

    /// `c Uᵃ Vᵇ`, or zero if it exceeds the truncation.
    pub fn monomial(a: i32, b: i32, c: Complex64, q: Complex64, max_degree: u32) -> Self {
        let mut x = Self::zero(q, max_degree);
        x.insert((a, b), dd(c));
        x
    }

    /// `qᵏ Uᵃ Vᵇ` with the power of q formed exactly in double-double.
    pub fn q_monomial(a: i32, b: i32, k: i32, q: Complex64, max_degree: u32) -> Self {
        let mut x = Self::zero(q, max_degree);
        x.insert((a, b), dd_powi(dd(q), k));
        x
    }

    pub fn u(q: Complex64, max_degree: u32) -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0), q, max_degree)
    }

    pub fn v(q: Complex64, max_degree: u32) -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0), q, max_degree)
    }

    fn insert(&mut self, key: (i32, i32), c: Cdd) {
        if degree(&key) > self.max_degree || is_zero(&c) {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(dd_zero);
        *entry += c;
        if is_zero(entry) {
            self.coeffs.remove(&key);
        }
    }

    pub fn coeff(&self, a: i32, b: i32) -> Complex64 {
        self.coeffs
            .get(&(a, b))
            .map_or(Complex64::new(0.0, 0.0), |&c| to_f64(c))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, to_f64(v)))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q || self.max_degree != other.max_degree {
            return Err(Error::Algebra(format!(
                "parameter mismatch: (q = {}, degree {}) vs (q = {}, degree {})",
                self.q, self.max_degree, other.q, other.max_degree
            )));
        }
        Ok(())
    }

    /// Same element under a different truncation bound.
    pub fn retruncate(&self, max_degree: u32) -> Self {
        let mut x = Self::zero(self.q, max_degree);
        for (&k, &c) in &self.coeffs {
            x.insert(k, c);
        }
        x
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut x = self.clone();
        for (&k, &c) in &other.coeffs {
            x.insert(k, c);
        }
        Ok(x)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    fn scale_dd(&self, s: Cdd) -> Self {
        let mut x = Self::zero(self.q, self.max_degree);
        for (&k, &c) in &self.coeffs {
            x.insert(k, c * s);
        }
        x
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.scale_dd(dd(s))
    }

    /// Multiplies by `qᵏ`.
    pub fn scale_q(&self, k: i32) -> Self {
        self.scale_dd(dd_powi(dd(self.q), k))
    }

    pub fn add_scalar(&self, s: Complex64) -> Self {
        let mut x = self.clone();
        x.insert((0, 0), dd(s));
        x
    }

    /// Normal-ordered product, using `Vᵇ Uᶜ = q^{-2bc} Uᶜ Vᵇ`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut x = Self::zero(self.q, self.max_degree);
        let q2 = dd(self.q) * dd(self.q);
        let mut powers: BTreeMap<i32, Cdd> = BTreeMap::new();
        for (&(a, b), &c1) in &self.coeffs {
            for (&(c, d), &c2) in &other.coeffs {
                let key = (a + c, b + d);
                if degree(&key) > self.max_degree {
                    continue;
                }
                let k = -(b * c);
                let f = *powers.entry(k).or_insert_with(|| dd_powi(q2, k));
                x.insert(key, c1 * c2 * f);
            }
        }
        Ok(x)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.q, self.max_degree);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of `x = m (1 + n)` with `m` the unique term of lowest `a + b`;
    /// `(1 + n)⁻¹ m⁻¹` is summed as a geometric series with `pad` extra
    /// degrees of working room, then cut back to `max_degree`.
    pub fn inverse_padded(&self, pad: u32) -> Result<Self> {
        let lowest = self
            .coeffs
            .keys()
            .map(|(a, b)| a + b)
            .min()
            .ok_or_else(|| Error::Algebra("zero is not invertible".into()))?;
        let leads: Vec<_> = self
            .coeffs
            .iter()
            .filter(|((a, b), _)| a + b == lowest)
            .collect();
        if leads.len() != 1 {
            return Err(Error::Algebra(format!(
                "no unique leading monomial ({} terms of weight {lowest})",
                leads.len()
            )));
        }
        let (&(ma, mb), &mc) = leads[0];
        let work = self.max_degree + pad;
        let x = self.retruncate(work);
        // (c Uᵃ Vᵇ)⁻¹ = c⁻¹ q^{-2ab} U⁻ᵃ V⁻ᵇ
        let mut m_inv = Self::zero(self.q, work);
        m_inv.insert((-ma, -mb), dd_inv(mc) * dd_powi(dd(self.q), -2 * ma * mb));
        let n = m_inv.mul(&x)?.add_scalar(Complex64::new(-1.0, 0.0));
        let minus_n = n.scale(Complex64::new(-1.0, 0.0));
        let mut sum = Self::one(self.q, work);
        let mut power = Self::one(self.q, work);
        for _ in 0..work {
            power = power.mul(&minus_n)?;
            if power.is_empty() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.mul(&m_inv)?.retruncate(self.max_degree))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_padded(self.max_degree)
    }

    /// True when every term has `a, b >= 0` and `a + b >= 1`.
    pub fn is_positive(&self) -> bool {
        self.coeffs
            .keys()
            .all(|&(a, b)| a >= 0 && b >= 0 && a + b >= 1)
    }

    /// Largest coefficient difference over monomials of degree `<= upto`,
    /// relative to `max(1, |x|, |y|)`.
    pub fn discrepancy(&self, other: &Self, upto: u32) -> f64 {
        let mut keys: Vec<(i32, i32)> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        let get = |m: &BTreeMap<(i32, i32), Cdd>, k| m.get(&k).copied().unwrap_or_else(dd_zero);
        keys.into_iter()
            .filter(|k| degree(k) <= upto)
            .map(|k| {
                let (x, y) = (get(&self.coeffs, k), get(&other.coeffs, k));
                let diff = to_f64(x - y).norm();
                if diff == 0.0 {
                    0.0
                } else {
                    diff / 1f64.max(to_f64(x).norm()).max(to_f64(y).norm())
                }
            })
            .fold(0.0, f64::max)
    }

    /// Value after replacing `U, V` by commuting scalars.
    pub fn evaluate_commutative(&self, u: Complex64, v: Complex64) -> Complex64 {
        self.terms()
            .map(|((a, b), c)| c * u.powi(a) * v.powi(b))
            .sum()
    }
}

pub fn weyl_mul(x: &WeylElement, y: &WeylElement) -> Result<WeylElement> {
    x.mul(y)
}

pub fn weyl_inverse(x: &WeylElement) -> Result<WeylElement> {
    x.inverse()
}

/// `Σ_{n<=order} cₙ xⁿ` with the q-exponential coefficients.
pub fn e_of(x: &WeylElement, order: usize) -> Result<WeylElement> {
    if !x.is_positive() && !x.is_empty() {
        return Err(Error::Algebra(
            "e_of needs an argument in the positive cone (a, b >= 0, a + b >= 1)".into(),
        ));
    }
    let coeffs = q_exp_coefficients_dd(x.q, order)?;
    let mut sum = WeylElement::one(x.q, x.max_degree);
    let mut power = WeylElement::one(x.q, x.max_degree);
    for &c in coeffs.iter().skip(1) {
        power = power.mul(x)?;
        if power.is_empty() {
            break;
        }
        sum = sum.add(&power.scale_dd(c))?;
    }
    Ok(sum)
}

/// `X₁ .. X₅` in their closed forms, factor order as written.
pub fn quantum_y_elements(q: Complex64, max_degree: u32) -> Result<[WeylElement; 5]> {
    let one = Complex64::new(1.0, 0.0);
    let u = WeylElement::u(q, max_degree);
    let v = WeylElement::v(q, max_degree);
    let u_inv = WeylElement::monomial(-1, 0, one, q, max_degree);
    let v_inv = WeylElement::monomial(0, -1, one, q, max_degree);
    let x3 = u_inv.mul(&v.scale_q(1).add_scalar(one))?;
    let middle = u
        .add(&v)?
        .add(&WeylElement::q_monomial(0, 0, -1, q, max_degree))?;
    let x4 = u_inv.mul(&middle)?.mul(&v_inv)?;
    let x5 = u.scale_q(1).add_scalar(one).mul(&v_inv)?;
    Ok([u, v, x3, x4, x5])
}

/// `X_i X_{i+2} - 1 - q X_{i+1}` for `i = 1..5`, indices mod 5.
pub fn y_recurrence_defects(xs: &[WeylElement; 5]) -> Result<[f64; 5]> {
    let mut out = [0.0; 5];
    for i in 0..5 {
        let lhs = xs[i].mul(&xs[(i + 2) % 5])?;
        let rhs = xs[(i + 1) % 5]
            .scale_q(1)
            .add_scalar(Complex64::new(1.0, 0.0));
        out[i] = lhs.discrepancy(&rhs, lhs.max_degree);
    }
    Ok(out)
}

/// Runs `X_{i+2} = X_i⁻¹ (1 + q X_{i+1})` from `(U, V)` for five steps, at
/// working degree `work`, and returns `(X₆, X₇)`.
pub fn y_orbit_formal(q: Complex64, work: u32) -> Result<(WeylElement, WeylElement)> {
    let one = Complex64::new(1.0, 0.0);
    let mut prev = WeylElement::u(q, work);
    let mut cur = WeylElement::v(q, work);
    for _ in 0..5 {
        let next = prev.inverse()?.mul(&cur.scale_q(1).add_scalar(one))?;
        prev = cur;
        cur = next;
    }
    Ok((prev, cur))
}

fn formal_report(
    identity: &str,
    q: Complex64,
    order: usize,
    residual: f64,
    started: Instant,
) -> VerificationReport {
    VerificationReport::new("formal-algebra", identity, residual, 1e-12)
        .param("q_re", q.re)
        .param("q_im", q.im)
        .param("order", order as f64)
        .note(
            "comparison",
            "coefficients of degree <= order, relative to max(1, |c|)",
        )
        .timed(started)
}

fn failed(
    identity: &str,
    q: Complex64,
    order: usize,
    e: Error,
    started: Instant,
) -> VerificationReport {
    formal_report(identity, q, order, f64::NAN, started).note("error", e)
}

/// `e(U) e(V) = e(U + V)`.
pub fn schutzenberger_check(q: Complex64, order: usize) -> VerificationReport {
    let started = Instant::now();
    let run = || -> Result<f64> {
        let d = order as u32;
        let u = WeylElement::u(q, d);
        let v = WeylElement::v(q, d);
        let lhs = e_of(&u, order)?.mul(&e_of(&v, order)?)?;
        let rhs = e_of(&u.add(&v)?, order)?;
        Ok(lhs.discrepancy(&rhs, d))
    };
    match run() {
        Ok(r) => formal_report("e(U)e(V) = e(U+V)", q, order, r, started),
        Err(e) => failed("e(U)e(V) = e(U+V)", q, order, e, started),
    }
}

/// `e(V) e(U) = e(U) e(q⁻¹UV) e(V)`.
pub fn compact_pentagon_check(q: Complex64, order: usize) -> VerificationReport {
    let started = Instant::now();
    let run = || -> Result<f64> {
        let d = order as u32;
        let u = WeylElement::u(q, d);
        let v = WeylElement::v(q, d);
        let uv = u.mul(&v)?.scale(q.inv());
        let lhs = e_of(&v, order)?.mul(&e_of(&u, order)?)?;
        let rhs = e_of(&u, order)?
            .mul(&e_of(&uv, order)?)?
            .mul(&e_of(&v, order)?)?;
        Ok(lhs.discrepancy(&rhs, d))
    };
    let id = "e(V)e(U) = e(U)e(UV/q)e(V)";
    match run() {
        Ok(r) => formal_report(id, q, order, r, started),
        Err(e) => failed(id, q, order, e, started),
    }
}

fn volkov_sides(q: Complex64, order: usize) -> Result<(WeylElement, WeylElement)> {
    // X₃⁻¹, X₄⁻¹, X₅⁻¹ lie in the positive cone, so the degree cut is exact
    // the closed forms carry U⁻¹V⁻¹, so they are built two degrees wider
    let d = order as u32;
    let xs = quantum_y_elements(q, d + 2)?;
    let lhs = e_of(&xs[0].retruncate(d), order)?.mul(&e_of(&xs[1].retruncate(d), order)?)?;
    let inv = |x: &WeylElement| Ok::<_, Error>(x.inverse()?.retruncate(d));
    let rhs = e_of(&inv(&xs[4])?, order)?
        .mul(&e_of(&inv(&xs[3])?, order)?)?
        .mul(&e_of(&inv(&xs[2])?, order)?)?;
    Ok((lhs, rhs))
}

/// `e(X₁) e(X₂) = e(X₅⁻¹) e(X₄⁻¹) e(X₃⁻¹)`, with a stability figure comparing
/// the expansion against one made one order higher.
pub fn volkov_formal_check(q: Complex64, order: usize) -> VerificationReport {
    let started = Instant::now();
    let id = "e(X1)e(X2) = e(X5^-1)e(X4^-1)e(X3^-1)";
    let run = || -> Result<(f64, f64)> {
        let (lhs, rhs) = volkov_sides(q, order)?;
        let (lhs_hi, _) = volkov_sides(q, order + 1)?;
        let d = order as u32;
        Ok((
            lhs.discrepancy(&rhs, d),
            lhs.discrepancy(&lhs_hi.retruncate(d), d),
        ))
    };
    match run() {
        Ok((r, stab)) => formal_report(id, q, order, r, started).param("stability", stab),
        Err(e) => failed(id, q, order, e, started),
    }
}

/// Exact recurrence checks on the closed forms, including the wrap-around.
pub fn y_system_formal_check(q: Complex64) -> VerificationReport {
    let started = Instant::now();
    let id = "X_i X_(i+2) = 1 + q X_(i+1), i = 1..5";
    let run = || -> Result<f64> {
        let xs = quantum_y_elements(q, DEFAULT_MAX_DEGREE)?;
        Ok(y_recurrence_defects(&xs)?.into_iter().fold(0.0, f64::max))
    };
    match run() {
        Ok(r) => formal_report(id, q, 0, r, started)
            .note("exact", "closed forms are Laurent polynomials"),
        Err(e) => failed(id, q, 0, e, started),
    }
}
