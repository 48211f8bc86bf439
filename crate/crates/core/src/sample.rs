//! Deterministic sample points.
//!
//! 64-bit linear congruential generator `s ← a·s + c (mod 2⁶⁴)` with
//! `a = 6364136223846793005`, `c = 1442695040888963407`. Uniform doubles use
//! the top 53 bits of the new state.

pub const LCG_A: u64 = 6_364_136_223_846_793_005;
pub const LCG_C: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(LCG_A).wrapping_add(LCG_C);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// `e^{U}` with `U` uniform in `[ln lo, ln hi)`, for positive samples spread over decades.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.range(lo.ln(), hi.ln()).exp()
    }

    /// Uniform in the open interval `(0, 1)`.
    pub fn open_unit(&mut self) -> f64 {
        loop {
            let x = self.uniform();
            if x > 0.0 {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_states() {
        let mut g = Lcg::new(0);
        assert_eq!(g.next_u64(), LCG_C);
        assert_eq!(g.next_u64(), LCG_C.wrapping_mul(LCG_A).wrapping_add(LCG_C));
    }

    #[test]
    fn reproducible_and_in_range() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        for _ in 0..1000 {
            let x = a.range(-2.0, 3.0);
            assert_eq!(x, b.range(-2.0, 3.0));
            assert!((-2.0..3.0).contains(&x));
        }
        let y = Lcg::new(7).log_uniform(0.01, 100.0);
        assert!((0.01..100.0).contains(&y));
    }
}
