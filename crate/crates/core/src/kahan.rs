//! Compensated (Kahan) summation.
//!
//! Partial sums that feed criterion margins must not be dominated by
//! accumulation noise, so every real-valued partial sum in this crate goes
//! through [`KahanSum`] instead of a bare `f64` accumulator.

use std::ops::AddAssign;

use num_complex::Complex64;

/// Kahan–Babuška (Neumaier) compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.err += (self.sum - t) + x;
        } else {
            self.err += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

impl AddAssign<f64> for KahanSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl From<KahanSum> for f64 {
    fn from(k: KahanSum) -> f64 {
        k.value()
    }
}

/// Componentwise compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl AddAssign<Complex64> for KahanComplex {
    fn add_assign(&mut self, rhs: Complex64) {
        self.add(rhs);
    }
}

/// Sums an iterator with compensation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        let mut k = KahanSum::new();
        k.add(1.0);
        k.add(1e100);
        k.add(1.0);
        k.add(-1e100);
        assert_eq!(k.value(), 2.0);
    }

    #[test]
    fn harmonic_tail_is_stable() {
        // Summing 1/i ascending vs descending must agree to ~1 ulp.
        let n = 100_000u64;
        let up = compensated_sum((1..=n).map(|i| 1.0 / i as f64));
        let down = compensated_sum((1..=n).rev().map(|i| 1.0 / i as f64));
        assert!((up - down).abs() <= 1e-13 * up);
    }
}
