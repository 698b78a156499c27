//! Laplace transforms on the multiplicative naturals and torus integral
//! representations of arithmetic functions.
//!
//! Writing n = p_1^{α_1} p_2^{α_2} ... and t = (t_1, t_2, ...) for a point of
//! the infinite-dimensional torus, the transform of a summable arithmetic
//! function is f̃(z) = Σ_a f(a) z^{α(a)} on the polydisc |z_j| <= p_j^{-β}.
//! Three classical facts drive everything here:
//!
//! * Euler product: Σ_n t^{α(n)}/n^β = Π_j (1 - t_j/p_j^β)^{-1} for β > 1.
//! * The transform is multiplicative over Dirichlet convolution:
//!   (f ∗ g)~ = f̃ · g̃.
//! * Fourier inversion on the torus recovers f(a) as a^β times a torus
//!   integral of f̃(r.t) t^{-α(a)} against normalized Haar measure.
//!
//! Because Haar measure on the torus is a product of circle averages and
//! every coordinate with α_j(a) = 0 integrates to exactly 1, each torus
//! integral collapses to a finite product of one-dimensional circle factors
//! over the primes dividing the target. The closed forms are:
//!
//! * μ kernel, ∫ (1 - t/p^β) t^{-α} dt:  1 at α = 0, -1/p^β at α = 1,
//!   0 at α >= 2 — so a^β I(a) recovers μ(a).
//! * φ kernel, ∫ (1 - t/p^β) / ((1 - t/p^{β-1}) t^α) dt:  1 at α = 0,
//!   (p-1)/p^{(β-1)α+1} at α >= 1 — so a^β J(a) recovers φ(a), for β > 2.
//! * Λ kernel: expanding the quotient of transforms as the Euler product
//!   times Σ_j log p_j (t_j p_j^{-β}) / (1 - t_j p_j^{-β}) and averaging
//!   term by term leaves log p · p^{-βm} when n = p^m and 0 otherwise.
//!   This closed form is derived, not quoted, and is cross-validated against
//!   circle quadrature in the test suite before anything else relies on it.
//!
//! With integer β every factor is an exact rational, and the sweeps in the
//! acceptance tests check reconstruction by exact equality rather than by
//! tolerance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize_u64, first_primes, SieveTable};
use crate::dirichlet::{convolve, ArithmeticFunction, Weight};
use crate::error::{Error, Result};
use crate::kahan::{KahanComplex, KahanSum};

/// Slack for membership tests of floating-point unit-modulus coordinates.
const UNIT_MODULUS_TOL: f64 = 1e-14;

/// A point (t_1, ..., t_K) of the torus truncated to the first K primes.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTorusPoint {
    coords: Vec<Complex64>,
}

impl TruncatedTorusPoint {
    /// Validates that every coordinate has unit modulus (within 1e-14).
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        for (j, c) in coords.iter().enumerate() {
            if (c.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
                return Err(Error::InvalidArgument(format!(
                    "torus coordinate {j} has modulus {} != 1",
                    c.norm()
                )));
            }
        }
        Ok(Self { coords })
    }

    pub fn from_phases(phases: &[f64]) -> Self {
        Self {
            coords: phases
                .iter()
                .map(|&th| Complex64::from_polar(1.0, th))
                .collect(),
        }
    }

    pub fn all_ones(dim: usize) -> Self {
        Self {
            coords: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Deterministic pseudo-random torus points for sampling checks.
pub fn random_torus_points(count: usize, dim: usize, seed: u64) -> Vec<TruncatedTorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let phases: Vec<f64> = (0..dim)
                .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
                .collect();
            TruncatedTorusPoint::from_phases(&phases)
        })
        .collect()
}

/// Which integrand a circle factor came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Mu,
    Phi,
    Mangoldt,
}

/// An exact rational or floating scalar, depending on the weight mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Approx(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }
}

/// One per-prime circle integral.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFactor {
    pub prime: u64,
    pub weight: Weight,
    pub alpha: u32,
    pub kind: FactorKind,
    pub value: Value,
}

fn big_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// Closed-form circle factor per the case tables in the module docs.
pub fn circle_factor_closed(
    kind: FactorKind,
    p: u64,
    weight: &Weight,
    alpha: u32,
) -> Result<CircleFactor> {
    if kind == FactorKind::Phi && weight.beta() <= 2.0 {
        return Err(Error::BetaTooSmall {
            beta: weight.beta(),
            min: 2.0,
        });
    }
    let value = match weight.exact_beta() {
        Some(b) => Value::Exact(closed_exact(kind, p, b, alpha)),
        None => Value::Approx(closed_f64(kind, p, weight.beta(), alpha)),
    };
    Ok(CircleFactor {
        prime: p,
        weight: *weight,
        alpha,
        kind,
        value,
    })
}

fn closed_exact(kind: FactorKind, p: u64, beta: u32, alpha: u32) -> BigRational {
    match kind {
        FactorKind::Mu => match alpha {
            0 => BigRational::one(),
            1 => -BigRational::new(BigInt::one(), big_pow(p, beta)),
            _ => BigRational::zero(),
        },
        FactorKind::Phi => match alpha {
            0 => BigRational::one(),
            a => BigRational::new(BigInt::from(p - 1), big_pow(p, (beta - 1) * a + 1)),
        },
        FactorKind::Mangoldt => match alpha {
            0 => BigRational::zero(),
            a => BigRational::new(BigInt::one(), big_pow(p, beta * a)),
        },
    }
}

fn closed_f64(kind: FactorKind, p: u64, beta: f64, alpha: u32) -> f64 {
    let p = p as f64;
    match kind {
        FactorKind::Mu => match alpha {
            0 => 1.0,
            1 => -p.powf(-beta),
            _ => 0.0,
        },
        FactorKind::Phi => match alpha {
            0 => 1.0,
            a => (p - 1.0) * p.powf(-((beta - 1.0) * a as f64 + 1.0)),
        },
        FactorKind::Mangoldt => match alpha {
            0 => 0.0,
            a => p.powf(-beta * a as f64),
        },
    }
}

/// Uniform M-node average of the circle integrand over the unit circle.
///
/// The integrands are geometric series in t, so the aliasing error of the
/// uniform rule decays like p^{-(β-1)M}; the μ integrand is a trigonometric
/// polynomial of degree α + 1 and is integrated exactly once M > α + 1.
pub fn circle_factor_quadrature(
    kind: FactorKind,
    p: u64,
    beta: f64,
    alpha: u32,
    nodes: u32,
) -> Result<Complex64> {
    let min_beta = if kind == FactorKind::Phi { 2.0 } else { 1.0 };
    if beta <= min_beta {
        return Err(Error::BetaTooSmall {
            beta,
            min: min_beta,
        });
    }
    if nodes < alpha + 2 {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs at least alpha + 2 = {} nodes, got {nodes}",
            alpha + 2
        )));
    }
    let pf = p as f64;
    let r = pf.powf(-beta);
    let s = pf.powf(1.0 - beta);
    let mut acc = KahanComplex::new();
    for k in 0..nodes {
        let theta = std::f64::consts::TAU * k as f64 / nodes as f64;
        let t = Complex64::from_polar(1.0, theta);
        let t_neg_alpha = Complex64::from_polar(1.0, -theta * alpha as f64);
        let integrand = match kind {
            FactorKind::Mu => (Complex64::new(1.0, 0.0) - t * r) * t_neg_alpha,
            FactorKind::Phi => {
                (Complex64::new(1.0, 0.0) - t * r) / (Complex64::new(1.0, 0.0) - t * s)
                    * t_neg_alpha
            }
            FactorKind::Mangoldt => t * r / (Complex64::new(1.0, 0.0) - t * r) * t_neg_alpha,
        };
        acc.add(integrand);
    }
    Ok(acc.value() / nodes as f64)
}

/// Node count that drives the aliasing error below `tol`.
pub fn quadrature_nodes_for(p: u64, beta: f64, alpha: u32, tol: f64) -> u32 {
    let decay = (beta - 1.0) * (p as f64).ln();
    let aliasing = (-tol.ln() / decay).ceil() as u32 + alpha + 1;
    aliasing.max(alpha + 2)
}

/// The full torus integral for one target, as a finite product of circle
/// factors, with the recovered arithmetic-function value alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusIntegralResult {
    pub target: u64,
    pub weight: Weight,
    /// The integral itself, e.g. μ(a)/a^β.
    pub value: Value,
    /// a^β times the integral, i.e. the recovered function value.
    pub reconstructed: Value,
}

fn check_target(a: u64, name: &str) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidArgument(format!(
            "{name}: target must be >= 1"
        )));
    }
    Ok(())
}

fn product_result(
    a: u64,
    weight: &Weight,
    factors: impl Iterator<Item = Value>,
) -> TorusIntegralResult {
    match weight.exact_beta() {
        Some(b) => {
            let mut prod = BigRational::one();
            for f in factors {
                match f {
                    Value::Exact(r) => prod *= r,
                    Value::Approx(_) => unreachable!("exact weight produced float factor"),
                }
            }
            let scale = BigRational::from_integer(BigInt::from(a).pow(b));
            let reconstructed = &scale * &prod;
            TorusIntegralResult {
                target: a,
                weight: *weight,
                value: Value::Exact(prod),
                reconstructed: Value::Exact(reconstructed),
            }
        }
        None => {
            let mut prod = 1.0f64;
            for f in factors {
                prod *= f.to_f64();
            }
            let scale = (a as f64).powf(weight.beta());
            TorusIntegralResult {
                target: a,
                weight: *weight,
                value: Value::Approx(prod),
                reconstructed: Value::Approx(scale * prod),
            }
        }
    }
}

/// Torus integral representation of μ: the product of μ-kernel circle
/// factors over the primes dividing `a`; `reconstructed` equals μ(a).
pub fn torus_integral_mu(a: u64, weight: &Weight) -> Result<TorusIntegralResult> {
    check_target(a, "torus_integral_mu")?;
    torus_integral_mu_from_factors(a, &factorize_u64(a), weight)
}

/// Same, with the factorization supplied by the caller (sieve-driven sweeps).
pub fn torus_integral_mu_from_factors(
    a: u64,
    factors: &[(u64, u32)],
    weight: &Weight,
) -> Result<TorusIntegralResult> {
    let vals: Result<Vec<Value>> = factors
        .iter()
        .map(|&(p, e)| circle_factor_closed(FactorKind::Mu, p, weight, e).map(|f| f.value))
        .collect();
    Ok(product_result(a, weight, vals?.into_iter()))
}

/// Torus integral representation of φ; requires β > 2.
pub fn torus_integral_phi(a: u64, weight: &Weight) -> Result<TorusIntegralResult> {
    check_target(a, "torus_integral_phi")?;
    torus_integral_phi_from_factors(a, &factorize_u64(a), weight)
}

pub fn torus_integral_phi_from_factors(
    a: u64,
    factors: &[(u64, u32)],
    weight: &Weight,
) -> Result<TorusIntegralResult> {
    if weight.beta() <= 2.0 {
        return Err(Error::BetaTooSmall {
            beta: weight.beta(),
            min: 2.0,
        });
    }
    let vals: Result<Vec<Value>> = factors
        .iter()
        .map(|&(p, e)| circle_factor_closed(FactorKind::Phi, p, weight, e).map(|f| f.value))
        .collect();
    Ok(product_result(a, weight, vals?.into_iter()))
}

/// Torus integral representation of Λ, via the derived closed form
/// log p · p^{-βm} for n = p^m (see the module docs); zero whenever n is 1
/// or has two or more distinct prime factors.
pub fn torus_integral_mangoldt(n: u64, weight: &Weight) -> Result<TorusIntegralResult> {
    check_target(n, "torus_integral_mangoldt")?;
    torus_integral_mangoldt_from_factors(n, &factorize_u64(n), weight)
}

pub fn torus_integral_mangoldt_from_factors(
    n: u64,
    factors: &[(u64, u32)],
    weight: &Weight,
) -> Result<TorusIntegralResult> {
    let (value, reconstructed) = match factors {
        [(p, m)] => {
            let log_p = (*p as f64).ln();
            match weight.exact_beta() {
                Some(b) => {
                    // n^β p^{-βm} = 1 exactly, so the log never picks up
                    // power-function rounding.
                    let factor = BigRational::new(BigInt::one(), big_pow(*p, b * m));
                    let scale = BigRational::from_integer(BigInt::from(n).pow(b));
                    let unit = (&scale * &factor).to_f64().unwrap();
                    (log_p * factor.to_f64().unwrap(), log_p * unit)
                }
                None => {
                    let v = log_p * (*p as f64).powf(-weight.beta() * *m as f64);
                    (v, (n as f64).powf(weight.beta()) * v)
                }
            }
        }
        _ => (0.0, 0.0),
    };
    Ok(TorusIntegralResult {
        target: n,
        weight: *weight,
        value: Value::Approx(value),
        reconstructed: Value::Approx(reconstructed),
    })
}

/// Quadrature route for the Λ integral (the integral itself, i.e. Λ(n)/n^β):
/// sums, over an explicit prime set, log p_j times the active-kernel circle
/// quadrature at prime j and the plain monomial averages at every other
/// prime in the set. Primes outside the set carry exponent 0 and contribute
/// exactly 1. Used to validate the closed form in
/// [`torus_integral_mangoldt`]; comparisons belong on this scale, since
/// multiplying a quadrature value by n^β amplifies its rounding floor.
pub fn mangoldt_quadrature(n: u64, beta: f64, nodes: u32) -> Result<f64> {
    check_target(n, "mangoldt_quadrature")?;
    if beta <= 1.0 {
        return Err(Error::BetaTooSmall { beta, min: 1.0 });
    }
    let factors = factorize_u64(n);
    // The primes dividing n plus a few spectators that must come out zero.
    let mut prime_set: Vec<u64> = first_primes(factors.len() + 3);
    for &(p, _) in &factors {
        if !prime_set.contains(&p) {
            prime_set.push(p);
        }
    }
    prime_set.sort_unstable();
    let alpha_of = |p: u64| {
        factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    };

    let mut total = KahanSum::new();
    for &pj in &prime_set {
        let mut term = (pj as f64).ln()
            * circle_factor_quadrature(FactorKind::Mangoldt, pj, beta, alpha_of(pj), nodes)?.re;
        for &pi in &prime_set {
            if pi != pj {
                term *= monomial_average(alpha_of(pi), nodes).re;
            }
        }
        total.add(term);
    }
    Ok(total.value())
}

/// Uniform M-node average of t^{-α} over the unit circle.
fn monomial_average(alpha: u32, nodes: u32) -> Complex64 {
    let mut acc = KahanComplex::new();
    for k in 0..nodes {
        let theta = std::f64::consts::TAU * k as f64 / nodes as f64;
        acc.add(Complex64::from_polar(1.0, -theta * alpha as f64));
    }
    acc.value() / nodes as f64
}

/// Truncated Laplace transform value plus the truncation remainder of the
/// stored support beyond `n_max`.
#[derive(Debug, Clone, Copy)]
pub struct LaplacePartial {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Σ_{a<=n_max} f(a) z^{α(a)} with z one complex number per prime index.
///
/// `z` must cover every prime up to `n_max` and lie in the polydisc
/// |z_j| <= p_j^{-β} of the declared weight.
pub fn laplace_partial(
    f: &ArithmeticFunction,
    z: &[Complex64],
    n_max: u64,
    weight: &Weight,
    sieve: &SieveTable,
) -> Result<LaplacePartial> {
    if n_max == 0 || n_max > f.support_limit() {
        return Err(Error::InvalidArgument(format!(
            "n_max {n_max} outside support 1..={}",
            f.support_limit()
        )));
    }
    if n_max > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x: n_max,
            limit: sieve.limit(),
        });
    }
    let mono = monomial_table(z, n_max, weight, sieve)?;
    let mut acc = KahanComplex::new();
    for a in 1..=n_max {
        acc.add(mono[a as usize] * f.value_f64(a));
    }
    let mut tail = KahanSum::new();
    for a in n_max + 1..=f.support_limit() {
        tail.add(f.value_f64(a).abs() * (a as f64).powf(-weight.beta()));
    }
    Ok(LaplacePartial {
        value: acc.value(),
        tail_bound: tail.value(),
    })
}

/// z^{α(a)} for every a <= n_max, built along the smallest-prime-factor
/// chain. Validates the polydisc condition coordinate by coordinate.
fn monomial_table(
    z: &[Complex64],
    n_max: u64,
    weight: &Weight,
    sieve: &SieveTable,
) -> Result<Vec<Complex64>> {
    let primes = sieve.primes();
    let needed = primes.partition_point(|&p| p <= n_max);
    if z.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "z supplies {} coordinates but primes up to {n_max} need {needed}",
            z.len()
        )));
    }
    let beta = weight.beta();
    let mut z_at = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
    for (j, &p) in primes[..needed].iter().enumerate() {
        let radius = (p as f64).powf(-beta);
        if z[j].norm() > radius * (1.0 + 1e-12) {
            return Err(Error::OutsidePolydisc { index: j });
        }
        z_at[p as usize] = z[j];
    }
    let mut mono = vec![Complex64::new(0.0, 0.0); n_max as usize + 1];
    mono[1] = Complex64::new(1.0, 0.0);
    for a in 2..=n_max as usize {
        let p = sieve.smallest_prime_factor(a as u64) as usize;
        mono[a] = mono[a / p] * z_at[p];
    }
    Ok(mono)
}

/// Π_{j<=k} (1 - t_j p_j^{-β})^{-1}, the truncated Euler product.
pub fn euler_product_partial(
    weight: &Weight,
    t: &TruncatedTorusPoint,
    k: usize,
) -> Result<Complex64> {
    if t.len() < k {
        return Err(Error::InvalidArgument(format!(
            "torus point supplies {} coordinates, need {k}",
            t.len()
        )));
    }
    let primes = first_primes(k);
    let mut prod = Complex64::new(1.0, 0.0);
    for (j, &p) in primes.iter().enumerate() {
        let r = (p as f64).powf(-weight.beta());
        prod /= Complex64::new(1.0, 0.0) - t.coords()[j] * r;
    }
    Ok(prod)
}

/// Partial sum Σ t^{α(n)} n^{-β} over the `primes`-smooth integers n <= limit.
#[derive(Debug, Clone, Copy)]
pub struct SmoothSum {
    pub value: Complex64,
    /// Integral bound on Σ_{n > limit} n^{-β}, which dominates the dropped
    /// smooth tail.
    pub tail_bound: f64,
    pub terms: u64,
}

/// Depth-first enumeration of smooth numbers; the independent counterpart
/// of [`euler_product_partial`] in the truncated Euler-product identity.
pub fn smooth_sum_partial(
    primes: &[u64],
    beta: f64,
    t: &TruncatedTorusPoint,
    limit: u64,
) -> Result<SmoothSum> {
    if beta <= 1.0 {
        return Err(Error::BetaTooSmall { beta, min: 1.0 });
    }
    if t.len() < primes.len() {
        return Err(Error::InvalidArgument(format!(
            "torus point supplies {} coordinates, need {}",
            t.len(),
            primes.len()
        )));
    }
    if limit == 0 {
        return Err(Error::InvalidArgument(
            "smooth_sum_partial: limit must be >= 1".into(),
        ));
    }
    struct Walk<'a> {
        primes: &'a [u64],
        coords: &'a [Complex64],
        beta: f64,
        limit: u64,
        acc: KahanComplex,
        terms: u64,
    }

    impl Walk<'_> {
        fn descend(&mut self, idx: usize, n: u64, mono: Complex64) {
            if idx == self.primes.len() {
                self.acc.add(mono * (n as f64).powf(-self.beta));
                self.terms += 1;
                return;
            }
            let p = self.primes[idx];
            let mut m = n;
            let mut tm = mono;
            loop {
                self.descend(idx + 1, m, tm);
                if m > self.limit / p {
                    break;
                }
                m *= p;
                tm *= self.coords[idx];
            }
        }
    }

    let mut walk = Walk {
        primes,
        coords: t.coords(),
        beta,
        limit,
        acc: KahanComplex::new(),
        terms: 0,
    };
    walk.descend(0, 1, Complex64::new(1.0, 0.0));
    let tail_bound = (limit as f64).powf(1.0 - beta) / (beta - 1.0);
    Ok(SmoothSum {
        value: walk.acc.value(),
        tail_bound,
        terms: walk.terms,
    })
}

/// Result of sampling |(f∗g)~ - f̃·g̃| at torus points, with the rigorous
/// cross-term bound the deviation must stay under.
#[derive(Debug, Clone, Copy)]
pub struct HomomorphismCheck {
    pub max_deviation: f64,
    /// Σ_{d<=n} |f(d)| d^{-β} Σ_{e>n/d, e<=n} |g(e)| e^{-β}, which bounds the
    /// cross terms d·e > n dropped by truncating the product of transforms.
    pub tail_bound: f64,
}

/// Samples the homomorphism identity (f ∗ g)~ = f̃ · g̃ at the given torus
/// points, all three transforms truncated at `n_max`, and reports the
/// maximum deviation together with the cross-term bound.
pub fn transform_homomorphism_check(
    f: &ArithmeticFunction,
    g: &ArithmeticFunction,
    points: &[TruncatedTorusPoint],
    weight: &Weight,
    n_max: u64,
    sieve: &SieveTable,
) -> Result<HomomorphismCheck> {
    let conv = convolve(f, g, n_max)?;
    let beta = weight.beta();
    let n = n_max as usize;

    let fv = f.values_f64(n_max);
    let gv = g.values_f64(n_max);
    let cv = conv.values_f64(n_max);

    // suffix[m] = Σ_{e=m+1..n} |g(e)| e^{-β}
    let mut suffix = vec![0.0f64; n + 1];
    let mut acc = KahanSum::new();
    for e in (1..=n).rev() {
        acc.add(gv[e - 1].abs() * (e as f64).powf(-beta));
        suffix[e - 1] = acc.value();
    }
    let mut bound = KahanSum::new();
    for d in 1..=n {
        bound.add(fv[d - 1].abs() * (d as f64).powf(-beta) * suffix[n / d]);
    }

    let primes = sieve.primes();
    let needed = primes.partition_point(|&p| p <= n_max);
    let mut max_dev = 0.0f64;
    for point in points {
        if point.len() < needed {
            return Err(Error::InvalidArgument(format!(
                "torus point supplies {} coordinates, need {needed}",
                point.len()
            )));
        }
        let z: Vec<Complex64> = (0..needed)
            .map(|j| point.coords()[j] * (primes[j] as f64).powf(-beta))
            .collect();
        let mono = monomial_table(&z, n_max, weight, sieve)?;
        let dot = |vals: &[f64]| {
            let mut acc = KahanComplex::new();
            for a in 1..=n {
                acc.add(mono[a] * vals[a - 1]);
            }
            acc.value()
        };
        let dev = (dot(&cv) - dot(&fv) * dot(&gv)).norm();
        max_dev = max_dev.max(dev);
    }
    Ok(HomomorphismCheck {
        max_deviation: max_dev,
        tail_bound: bound.value(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SieveTable;
    use approx::assert_abs_diff_eq;

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn closed_factor_pins() {
        let w3 = Weight::exact(3).unwrap();
        let f = circle_factor_closed(FactorKind::Mu, 2, &w3, 1).unwrap();
        assert_eq!(f.value, Value::Exact(rat(-1, 8)));
        let f = circle_factor_closed(FactorKind::Mu, 3, &w3, 2).unwrap();
        assert_eq!(f.value, Value::Exact(rat(0, 1)));
        let f = circle_factor_closed(FactorKind::Phi, 2, &w3, 2).unwrap();
        assert_eq!(f.value, Value::Exact(rat(1, 32)));
        let f = circle_factor_closed(FactorKind::Mangoldt, 2, &w3, 1).unwrap();
        assert_eq!(f.value, Value::Exact(rat(1, 8)));
    }

    #[test]
    fn quadrature_matches_closed_pins() {
        let q = circle_factor_quadrature(FactorKind::Mu, 2, 3.0, 1, 64).unwrap();
        assert_abs_diff_eq!(q.re, -0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(q.im, 0.0, epsilon = 1e-15);
        let q = circle_factor_quadrature(FactorKind::Phi, 2, 3.0, 1, 64).unwrap();
        assert_abs_diff_eq!(q.re, 0.125, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_alpha_zero_tiny_rule() {
        // The α = 0 μ integrand averages to exactly 1 already at M = 4:
        // the zero-mean term Σ t_k vanishes node-for-node.
        let q = circle_factor_quadrature(FactorKind::Mu, 5, 2.5, 0, 4).unwrap();
        assert_abs_diff_eq!(q.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_node_precondition() {
        assert!(circle_factor_quadrature(FactorKind::Mu, 2, 3.0, 3, 4).is_err());
        assert!(circle_factor_quadrature(FactorKind::Phi, 2, 2.0, 0, 8).is_err());
        assert!(quadrature_nodes_for(2, 3.0, 1, 1e-12) >= 3);
    }

    #[test]
    fn torus_mu_examples() {
        let w = Weight::exact(3).unwrap();
        let r = torus_integral_mu(1, &w).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 1)));
        assert_eq!(r.reconstructed, Value::Exact(rat(1, 1)));
        let r = torus_integral_mu(6, &w).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 216)));
        assert_eq!(r.reconstructed, Value::Exact(rat(1, 1)));
        let r = torus_integral_mu(4, &w).unwrap();
        assert_eq!(r.value, Value::Exact(rat(0, 1)));
    }

    #[test]
    fn torus_mu_squarefree_sign_pattern() {
        // For squarefree a with k prime factors the integral is (-1)^k/a^β.
        let w = Weight::exact(3).unwrap();
        let sieve = SieveTable::build(1000).unwrap();
        for a in 1..=1000u64 {
            if sieve.mobius(a) == 0 {
                continue;
            }
            let k = sieve.factorize(a).unwrap().len() as u32;
            let expected = BigRational::new(
                BigInt::from(if k.is_multiple_of(2) { 1 } else { -1 }),
                BigInt::from(a).pow(3),
            );
            let r = torus_integral_mu(a, &w).unwrap();
            assert_eq!(r.value, Value::Exact(expected), "a = {a}");
        }
    }

    #[test]
    fn torus_phi_examples() {
        let w = Weight::exact(3).unwrap();
        let r = torus_integral_phi(1, &w).unwrap();
        assert_eq!(r.reconstructed, Value::Exact(rat(1, 1)));
        let r = torus_integral_phi(2, &w).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 8)));
        assert_eq!(r.reconstructed, Value::Exact(rat(1, 1)));
        let r = torus_integral_phi(12, &w).unwrap();
        assert_eq!(r.value, Value::Exact(rat(1, 432)));
        assert_eq!(r.reconstructed, Value::Exact(rat(4, 1)));
        assert!(torus_integral_phi(5, &Weight::exact(2).unwrap()).is_err());
    }

    #[test]
    fn torus_mangoldt_examples() {
        let w = Weight::exact(3).unwrap();
        let r = torus_integral_mangoldt(1, &w).unwrap();
        assert_eq!(r.reconstructed.to_f64(), 0.0);
        let r = torus_integral_mangoldt(8, &w).unwrap();
        assert_abs_diff_eq!(r.reconstructed.to_f64(), 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.value.to_f64(), 2f64.ln() / 512.0, epsilon = 1e-18);
        let r = torus_integral_mangoldt(6, &w).unwrap();
        assert_eq!(r.reconstructed.to_f64(), 0.0);
    }

    #[test]
    fn mangoldt_quadrature_confirms_closed_form() {
        // Support cases: both prime-set summands of the n = 6 integral carry
        // a vanishing spectator average, so the quadrature comes out zero.
        assert_abs_diff_eq!(
            mangoldt_quadrature(6, 3.0, 64).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            mangoldt_quadrature(1, 3.0, 64).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        // n = 8: integral log2/8^3, and the reconstruction is still clean
        // at this size.
        let q = mangoldt_quadrature(8, 3.0, 64).unwrap();
        assert_abs_diff_eq!(q, 2f64.ln() / 512.0, epsilon = 1e-15);
        assert_abs_diff_eq!(512.0 * q, 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn laplace_unit_is_one() {
        let sieve = SieveTable::build(100).unwrap();
        let f = ArithmeticFunction::unit(100);
        let w = Weight::exact(2).unwrap();
        let z: Vec<Complex64> = sieve
            .primes()
            .iter()
            .map(|&p| Complex64::new((p as f64).powi(-2), 0.0))
            .collect();
        let lp = laplace_partial(&f, &z, 100, &w, &sieve).unwrap();
        assert_abs_diff_eq!(lp.value.re, 1.0, epsilon = 1e-15);
        assert_eq!(lp.tail_bound, 0.0);
    }

    #[test]
    fn laplace_ones_approaches_zeta() {
        let limit = 100_000u64;
        let sieve = SieveTable::build(limit).unwrap();
        let f = ArithmeticFunction::ones(limit);
        let w = Weight::exact(2).unwrap();
        let z: Vec<Complex64> = sieve
            .primes()
            .iter()
            .map(|&p| Complex64::new((p as f64).powi(-2), 0.0))
            .collect();
        let lp = laplace_partial(&f, &z, limit, &w, &sieve).unwrap();
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let tail = zeta2 - lp.value.re;
        assert!(lp.value.im.abs() < 1e-12);
        assert!(
            tail > 0.0 && tail < 1.0 / limit as f64 + 1e-9,
            "tail = {tail}"
        );
    }

    #[test]
    fn laplace_polydisc_enforced() {
        let sieve = SieveTable::build(100).unwrap();
        let f = ArithmeticFunction::ones(100);
        let w = Weight::exact(2).unwrap();
        let mut z: Vec<Complex64> = sieve
            .primes()
            .iter()
            .map(|&p| Complex64::new((p as f64).powi(-2), 0.0))
            .collect();
        z[0] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            laplace_partial(&f, &z, 100, &w, &sieve),
            Err(Error::OutsidePolydisc { index: 0 })
        ));
    }

    #[test]
    fn euler_product_basics() {
        let w = Weight::exact(3).unwrap();
        let t = TruncatedTorusPoint::all_ones(30);
        assert_eq!(
            euler_product_partial(&w, &t, 0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        // Monotone in K at t = 1, bounded by ζ(3).
        let zeta3 = 1.202_056_903_159_594_3;
        let mut prev = 1.0;
        for k in 1..=25 {
            let v = euler_product_partial(&w, &t, k).unwrap().re;
            assert!(v > prev && v < zeta3, "k = {k}: {v}");
            prev = v;
        }
    }

    #[test]
    fn smooth_sum_matches_euler_product() {
        let primes = first_primes(10); // primes <= 29
        let w = Weight::exact(2).unwrap();
        let t = TruncatedTorusPoint::all_ones(10);
        let product = euler_product_partial(&w, &t, 10).unwrap();
        let sum = smooth_sum_partial(&primes, 2.0, &t, 100_000_000).unwrap();
        assert!(
            (product - sum.value).norm() <= sum.tail_bound + 1e-12,
            "diff = {}, bound = {}",
            (product - sum.value).norm(),
            sum.tail_bound
        );
    }

    #[test]
    fn homomorphism_unit_case_is_exact() {
        let sieve = SieveTable::build(1000).unwrap();
        let f = ArithmeticFunction::unit(1000);
        let w = Weight::exact(3).unwrap();
        let points = random_torus_points(4, sieve.primes().len(), 7);
        let check = transform_homomorphism_check(&f, &f, &points, &w, 1000, &sieve).unwrap();
        assert_eq!(check.max_deviation, 0.0);
    }

    #[test]
    fn torus_point_validation() {
        assert!(TruncatedTorusPoint::new(vec![Complex64::new(0.5, 0.0)]).is_err());
        let p = TruncatedTorusPoint::from_phases(&[0.3, 1.2, 4.0]);
        assert_eq!(p.len(), 3);
        for c in p.coords() {
            assert_abs_diff_eq!(c.norm(), 1.0, epsilon = 1e-15);
        }
    }
}
