//! The convolution algebra of finitely supported arithmetic functions:
//! Dirichlet convolution, the unit element, the weighted l1 norm
//! Σ |f(n)| n^{-β}, and Möbius inversion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::SieveTable;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// The weight n ↦ n^{-β} that defines the norm and the polydisc radius.
///
/// Exact mode is only meaningful for integer β (p^β is rational only then).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    beta: f64,
    exact_beta: Option<u32>,
}

impl Weight {
    /// Floating-point weight, β > 1.
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta <= 1.0 {
            return Err(Error::BetaTooSmall { beta, min: 1.0 });
        }
        Ok(Self {
            beta,
            exact_beta: None,
        })
    }

    /// Exact-mode weight with integer β >= 2.
    pub fn exact(beta: u32) -> Result<Self> {
        if beta < 2 {
            return Err(Error::BetaTooSmall {
                beta: beta as f64,
                min: 1.0,
            });
        }
        Ok(Self {
            beta: beta as f64,
            exact_beta: Some(beta),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn exact_beta(&self) -> Option<u32> {
        self.exact_beta
    }

    pub fn is_exact(&self) -> bool {
        self.exact_beta.is_some()
    }
}

/// Which scalar kind an [`ArithmeticFunction`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Integer,
    Rational,
    Real,
}

impl ValueKind {
    fn name(self) -> &'static str {
        match self {
            ValueKind::Integer => "integer",
            ValueKind::Rational => "rational",
            ValueKind::Real => "real",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Values {
    Int(Vec<BigInt>),
    Rat(Vec<BigRational>),
    Real(Vec<f64>),
}

/// A finitely supported arithmetic function on `1..=support_limit`, stored
/// densely with a single scalar kind per instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithmeticFunction {
    values: Values,
}

impl ArithmeticFunction {
    pub fn from_integers(values: Vec<BigInt>) -> Result<Self> {
        Self::check_nonempty(values.len())?;
        Ok(Self {
            values: Values::Int(values),
        })
    }

    pub fn from_i64(values: Vec<i64>) -> Result<Self> {
        Self::from_integers(values.into_iter().map(BigInt::from).collect())
    }

    pub fn from_rationals(values: Vec<BigRational>) -> Result<Self> {
        Self::check_nonempty(values.len())?;
        Ok(Self {
            values: Values::Rat(values),
        })
    }

    pub fn from_reals(values: Vec<f64>) -> Result<Self> {
        Self::check_nonempty(values.len())?;
        Ok(Self {
            values: Values::Real(values),
        })
    }

    fn check_nonempty(len: usize) -> Result<()> {
        if len == 0 {
            Err(Error::InvalidArgument(
                "support must cover at least n = 1".into(),
            ))
        } else {
            Ok(())
        }
    }

    /// The unit of the algebra: 1 at n = 1, nothing elsewhere.
    pub fn unit(limit: u64) -> Self {
        let mut v = vec![BigInt::zero(); limit as usize];
        v[0] = BigInt::one();
        Self {
            values: Values::Int(v),
        }
    }

    /// The constant-one function on `1..=limit`.
    pub fn ones(limit: u64) -> Self {
        Self {
            values: Values::Int(vec![BigInt::one(); limit as usize]),
        }
    }

    /// id(n) = n on `1..=limit`.
    pub fn id(limit: u64) -> Self {
        Self {
            values: Values::Int((1..=limit).map(BigInt::from).collect()),
        }
    }

    /// μ on `1..=limit`, integer kind.
    pub fn mobius(sieve: &SieveTable, limit: u64) -> Result<Self> {
        Self::range_check(sieve, limit)?;
        Ok(Self {
            values: Values::Int((1..=limit).map(|n| BigInt::from(sieve.mobius(n))).collect()),
        })
    }

    /// φ on `1..=limit`, integer kind.
    pub fn totient(sieve: &SieveTable, limit: u64) -> Result<Self> {
        Self::range_check(sieve, limit)?;
        Ok(Self {
            values: Values::Int(
                (1..=limit)
                    .map(|n| BigInt::from(sieve.totient(n)))
                    .collect(),
            ),
        })
    }

    /// Λ on `1..=limit`, real kind.
    pub fn mangoldt(sieve: &SieveTable, limit: u64) -> Result<Self> {
        Self::range_check(sieve, limit)?;
        Ok(Self {
            values: Values::Real((1..=limit).map(|n| sieve.mangoldt(n)).collect()),
        })
    }

    /// log n on `1..=limit`, real kind.
    pub fn log(limit: u64) -> Self {
        Self {
            values: Values::Real((1..=limit).map(|n| (n as f64).ln()).collect()),
        }
    }

    fn range_check(sieve: &SieveTable, limit: u64) -> Result<()> {
        if limit == 0 || limit > sieve.limit() {
            return Err(Error::OutOfSieveRange {
                x: limit,
                limit: sieve.limit(),
            });
        }
        Ok(())
    }

    pub fn support_limit(&self) -> u64 {
        (match &self.values {
            Values::Int(v) => v.len(),
            Values::Rat(v) => v.len(),
            Values::Real(v) => v.len(),
        }) as u64
    }

    pub fn kind(&self) -> ValueKind {
        match &self.values {
            Values::Int(_) => ValueKind::Integer,
            Values::Rat(_) => ValueKind::Rational,
            Values::Real(_) => ValueKind::Real,
        }
    }

    pub fn as_integers(&self) -> Option<&[BigInt]> {
        match &self.values {
            Values::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rationals(&self) -> Option<&[BigRational]> {
        match &self.values {
            Values::Rat(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_reals(&self) -> Option<&[f64]> {
        match &self.values {
            Values::Real(v) => Some(v),
            _ => None,
        }
    }

    /// Value at `n` as f64, whatever the kind.
    pub fn value_f64(&self, n: u64) -> f64 {
        let i = n as usize - 1;
        match &self.values {
            Values::Int(v) => v[i].to_f64().unwrap_or(f64::NAN),
            Values::Rat(v) => rational_to_f64(&v[i]),
            Values::Real(v) => v[i],
        }
    }

    /// All values on `1..=limit` as f64.
    pub fn values_f64(&self, limit: u64) -> Vec<f64> {
        (1..=limit).map(|n| self.value_f64(n)).collect()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Dirichlet convolution (f ∗ g)(a) = Σ_{d|a} f(d) g(a/d) on `1..=limit`.
///
/// Only divisors `<= limit` ever contribute, so truncation at `limit` is
/// exact. Both operands must share a value kind; the result is exact when
/// they are exact.
pub fn convolve(
    f: &ArithmeticFunction,
    g: &ArithmeticFunction,
    limit: u64,
) -> Result<ArithmeticFunction> {
    if limit == 0 || limit > f.support_limit() || limit > g.support_limit() {
        return Err(Error::InvalidArgument(format!(
            "convolution limit {limit} exceeds a support limit ({}, {})",
            f.support_limit(),
            g.support_limit()
        )));
    }
    let n = limit as usize;
    let values = match (&f.values, &g.values) {
        (Values::Int(fv), Values::Int(gv)) => {
            let mut out = vec![BigInt::zero(); n];
            forward_accumulate(n, |d, e, a| out[a] += &fv[d] * &gv[e]);
            Values::Int(out)
        }
        (Values::Rat(fv), Values::Rat(gv)) => {
            let mut out = vec![BigRational::zero(); n];
            forward_accumulate(n, |d, e, a| out[a] += &fv[d] * &gv[e]);
            Values::Rat(out)
        }
        (Values::Real(fv), Values::Real(gv)) => {
            // Deterministic order: outer divisor ascending, inner multiple
            // ascending.
            let mut out = vec![0.0f64; n];
            forward_accumulate(n, |d, e, a| out[a] += fv[d] * gv[e]);
            Values::Real(out)
        }
        _ => {
            return Err(Error::MixedValueKinds {
                left: f.kind().name(),
                right: g.kind().name(),
            })
        }
    };
    Ok(ArithmeticFunction { values })
}

/// Visits every pair d*e = a <= n; indices passed to `emit` are zero-based.
fn forward_accumulate(n: usize, mut emit: impl FnMut(usize, usize, usize)) {
    for d in 1..=n {
        for e in 1..=n / d {
            emit(d - 1, e - 1, d * e - 1);
        }
    }
}

/// ‖f‖ = Σ_n |f(n)| n^{-β} over the support, compensated.
pub fn weighted_norm(f: &ArithmeticFunction, w: &Weight) -> f64 {
    let beta = w.beta();
    let mut acc = KahanSum::new();
    for n in 1..=f.support_limit() {
        let v = match &f.values {
            Values::Int(vals) => vals[n as usize - 1].abs().to_f64().unwrap_or(f64::NAN),
            Values::Rat(vals) => rational_to_f64(&vals[n as usize - 1]).abs(),
            Values::Real(vals) => vals[n as usize - 1].abs(),
        };
        acc.add(v * (n as f64).powf(-beta));
    }
    acc.value()
}

/// Möbius inversion: recovers f = g ∗ μ, so that f ∗ 1 = g on `1..=limit`.
///
/// μ is materialized in the value kind of `g`, keeping exact inputs exact.
pub fn mobius_invert(
    g: &ArithmeticFunction,
    sieve: &SieveTable,
    limit: u64,
) -> Result<ArithmeticFunction> {
    if limit > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x: limit,
            limit: sieve.limit(),
        });
    }
    let mu = match g.kind() {
        ValueKind::Integer => ArithmeticFunction::mobius(sieve, limit)?,
        ValueKind::Rational => ArithmeticFunction::from_rationals(
            (1..=limit)
                .map(|n| BigRational::from_integer(BigInt::from(sieve.mobius(n))))
                .collect(),
        )?,
        ValueKind::Real => {
            ArithmeticFunction::from_reals((1..=limit).map(|n| sieve.mobius(n) as f64).collect())?
        }
    };
    convolve(g, &mu, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SieveTable;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mobius_conv_ones_is_unit() {
        let sieve = SieveTable::build(10_000).unwrap();
        let mu = ArithmeticFunction::mobius(&sieve, 10_000).unwrap();
        let ones = ArithmeticFunction::ones(10_000);
        let conv = convolve(&mu, &ones, 10_000).unwrap();
        assert_eq!(conv, ArithmeticFunction::unit(10_000));
    }

    #[test]
    fn totient_conv_ones_is_id() {
        let sieve = SieveTable::build(2048).unwrap();
        let phi = ArithmeticFunction::totient(&sieve, 2048).unwrap();
        let ones = ArithmeticFunction::ones(2048);
        let conv = convolve(&phi, &ones, 2048).unwrap();
        assert_eq!(conv, ArithmeticFunction::id(2048));
        assert_eq!(conv.as_integers().unwrap()[11], BigInt::from(12));
    }

    #[test]
    fn mangoldt_conv_ones_is_log() {
        let sieve = SieveTable::build(4096).unwrap();
        let lambda = ArithmeticFunction::mangoldt(&sieve, 4096).unwrap();
        let ones = ArithmeticFunction::from_reals(vec![1.0; 4096]).unwrap();
        let conv = convolve(&lambda, &ones, 4096).unwrap();
        let vals = conv.as_reals().unwrap();
        for n in 1..=4096u64 {
            assert_abs_diff_eq!(vals[n as usize - 1], (n as f64).ln(), epsilon = 1e-12);
        }
    }

    #[test]
    fn mixed_kinds_rejected() {
        let f = ArithmeticFunction::from_i64(vec![1, 2, 3]).unwrap();
        let g = ArithmeticFunction::from_reals(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            convolve(&f, &g, 3),
            Err(Error::MixedValueKinds { .. })
        ));
    }

    #[test]
    fn unit_norm_is_one() {
        let f = ArithmeticFunction::unit(64);
        for beta in [1.5, 2.0, 3.0, 7.25] {
            assert_eq!(weighted_norm(&f, &Weight::new(beta).unwrap()), 1.0);
        }
    }

    #[test]
    fn id_norm_approaches_zeta_two() {
        let limit = 1_000_000u64;
        let f = ArithmeticFunction::id(limit);
        let norm = weighted_norm(&f, &Weight::exact(3).unwrap());
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let tail = zeta2 - norm;
        assert!(
            tail > 0.0 && tail < 1.0 / limit as f64 + 1e-9,
            "tail = {tail}"
        );
    }

    #[test]
    fn mobius_norm_triangle_bound() {
        let limit = 1_000_000u64;
        let sieve = SieveTable::build(limit).unwrap();
        let mu = ArithmeticFunction::mobius(&sieve, limit).unwrap();
        let ones = ArithmeticFunction::ones(limit);
        let w = Weight::exact(2).unwrap();
        assert!(weighted_norm(&mu, &w) <= weighted_norm(&ones, &w));
    }

    #[test]
    fn invert_id_gives_totient() {
        let sieve = SieveTable::build(10_000).unwrap();
        let id = ArithmeticFunction::id(10_000);
        let inv = mobius_invert(&id, &sieve, 10_000).unwrap();
        let phi = ArithmeticFunction::totient(&sieve, 10_000).unwrap();
        assert_eq!(inv, phi);
    }

    #[test]
    fn invert_unit_gives_mobius() {
        let sieve = SieveTable::build(512).unwrap();
        let unit = ArithmeticFunction::unit(512);
        let inv = mobius_invert(&unit, &sieve, 512).unwrap();
        assert_eq!(inv, ArithmeticFunction::mobius(&sieve, 512).unwrap());
    }

    #[test]
    fn invert_log_gives_mangoldt() {
        let sieve = SieveTable::build(4096).unwrap();
        let log = ArithmeticFunction::log(4096);
        let inv = mobius_invert(&log, &sieve, 4096).unwrap();
        let vals = inv.as_reals().unwrap();
        for n in 1..=4096u64 {
            assert_abs_diff_eq!(vals[n as usize - 1], sieve.mangoldt(n), epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_validation() {
        assert!(Weight::new(1.0).is_err());
        assert!(Weight::new(0.5).is_err());
        assert!(Weight::exact(1).is_err());
        let w = Weight::exact(3).unwrap();
        assert_eq!(w.beta(), 3.0);
        assert_eq!(w.exact_beta(), Some(3));
        assert!(!Weight::new(2.5).unwrap().is_exact());
    }
}
