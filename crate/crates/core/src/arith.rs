//! Exact integer-level infrastructure: prime generation, factorization into
//! exponent vectors, linear sieves for μ, φ, σ and smallest prime factors,
//! partial sums (Mertens, Chebyshev ψ), primorials and harmonic numbers.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Default cap on sieve sizes; override through [`SieveTable::build_with_cap`].
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// The prime-exponent sequence of a natural number: ordered
/// `(prime_index, exponent)` pairs with 1-based prime indices and no zero
/// exponents. The empty sequence represents n = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    entries: Vec<(u32, u32)>,
}

impl ExponentVector {
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies the factorization back together.
    pub fn reconstruct(&self) -> u64 {
        if self.entries.is_empty() {
            return 1;
        }
        let max_index = self.entries.iter().map(|&(j, _)| j).max().unwrap() as usize;
        let primes = first_primes(max_index);
        self.entries
            .iter()
            .map(|&(j, e)| primes[j as usize - 1].pow(e))
            .product()
    }
}

/// Factors `n` into its exponent vector.
///
/// Prime indices are recovered by sieving up to the largest prime factor,
/// so this is meant for desk-scale inputs; numbers with a prime factor above
/// 10^7 are rejected rather than silently sieving hundreds of megabytes.
pub fn exponent_vector(n: u64) -> Result<ExponentVector> {
    const INDEX_SIEVE_CAP: u64 = 10_000_000;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "exponent_vector: n must be >= 1".into(),
        ));
    }
    let factors = factorize_u64(n);
    let Some(&(max_p, _)) = factors.last() else {
        return Ok(ExponentVector {
            entries: Vec::new(),
        });
    };
    if max_p > INDEX_SIEVE_CAP {
        return Err(Error::SieveCapExceeded {
            requested: max_p,
            cap: INDEX_SIEVE_CAP,
        });
    }
    let primes = primes_up_to(max_p);
    let entries = factors
        .iter()
        .map(|&(p, e)| {
            let j = primes.binary_search(&p).expect("factor must be prime") as u32 + 1;
            (j, e)
        })
        .collect();
    Ok(ExponentVector { entries })
}

/// Trial-division factorization, `(prime, exponent)` pairs in ascending order.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// All primes `<= bound` by a plain sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    if k == 0 {
        return Vec::new();
    }
    // Rosser-type upper bound for p_k, valid for k >= 6.
    let kf = k as f64;
    let bound = if k < 6 {
        13.0
    } else {
        kf * (kf.ln() + kf.ln().ln()) + 1.0
    };
    let mut primes = primes_up_to(bound as u64);
    debug_assert!(primes.len() >= k);
    primes.truncate(k);
    primes
}

/// Sieve tables for μ, φ, σ and smallest prime factors on `1..=limit`.
///
/// Construction is a single linear-sieve pass; once built the table is
/// immutable and all queries are pure, so it can be shared freely across
/// threads.
pub struct SieveTable {
    limit: u64,
    mobius: Vec<i8>,
    totient: Vec<u64>,
    sigma: Vec<u64>,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl SieveTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_cap(limit, DEFAULT_SIEVE_CAP)
    }

    pub fn build_with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument("sieve limit must be >= 1".into()));
        }
        if limit > cap {
            return Err(Error::SieveCapExceeded {
                requested: limit,
                cap,
            });
        }
        let n = limit as usize;
        let mut mobius = vec![0i8; n + 1];
        let mut totient = vec![0u64; n + 1];
        let mut sigma = vec![0u64; n + 1];
        let mut spf = vec![0u32; n + 1];
        // Divisor sum restricted to the power of the smallest prime factor;
        // needed to extend sigma multiplicatively inside the linear sieve.
        let mut spf_part_sigma = vec![0u64; n + 1];
        let mut primes = Vec::new();

        if n >= 1 {
            spf[1] = 1;
            mobius[1] = 1;
            totient[1] = 1;
            sigma[1] = 1;
            spf_part_sigma[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
                mobius[i] = -1;
                totient[i] = i as u64 - 1;
                sigma[i] = i as u64 + 1;
                spf_part_sigma[i] = i as u64 + 1;
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                let j = i * p;
                spf[j] = p as u32;
                if p == spf[i] as usize {
                    mobius[j] = 0;
                    totient[j] = totient[i] * p as u64;
                    spf_part_sigma[j] = spf_part_sigma[i] * p as u64 + 1;
                    sigma[j] = sigma[i] / spf_part_sigma[i] * spf_part_sigma[j];
                } else {
                    mobius[j] = -mobius[i];
                    totient[j] = totient[i] * (p as u64 - 1);
                    spf_part_sigma[j] = 1 + p as u64;
                    sigma[j] = sigma[i] * (1 + p as u64);
                }
            }
        }

        Ok(Self {
            limit,
            mobius,
            totient,
            sigma,
            spf,
            primes,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes `<= limit` in ascending order.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn check_range(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit {
            return Err(Error::OutOfSieveRange {
                x: n,
                limit: self.limit,
            });
        }
        Ok(n as usize)
    }

    /// μ(n). Panics if `n` is outside `1..=limit`.
    pub fn mobius(&self, n: u64) -> i32 {
        self.mobius[n as usize] as i32
    }

    /// φ(n). Panics if `n` is outside `1..=limit`.
    pub fn totient(&self, n: u64) -> u64 {
        self.totient[n as usize]
    }

    /// σ(n), the divisor sum. Panics if `n` is outside `1..=limit`.
    pub fn sigma(&self, n: u64) -> u64 {
        self.sigma[n as usize]
    }

    /// Smallest prime factor of `n` (1 for n = 1).
    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    /// 1-based index of a prime in the table, if present.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    /// `(prime, exponent)` pairs of `n` via the smallest-prime-factor chain.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>> {
        let mut m = self.check_range(n)?;
        let mut out = Vec::new();
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Exponent vector of `n` with prime indices taken from this table.
    pub fn exponent_vector(&self, n: u64) -> Result<ExponentVector> {
        let factors = self.factorize(n)?;
        let entries = factors
            .iter()
            .map(|&(p, e)| {
                (
                    self.prime_index(p).expect("factor is a sieved prime") as u32,
                    e,
                )
            })
            .collect();
        Ok(ExponentVector { entries })
    }

    /// Λ(n) via the smallest-prime-factor chain: log p when n is a power of
    /// the single prime p, zero otherwise. Values are never stored.
    pub fn mangoldt(&self, n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let p = self.spf[n as usize] as u64;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        if m == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    }
}

/// Λ(n) without a sieve (trial division).
pub fn mangoldt(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("mangoldt: n must be >= 1".into()));
    }
    let factors = factorize_u64(n);
    Ok(match factors.as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    })
}

/// Mertens function M(x) = Σ_{n<=x} μ(n), summed directly from the table.
pub fn mertens(x: u64, sieve: &SieveTable) -> Result<i64> {
    if x > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x,
            limit: sieve.limit(),
        });
    }
    Ok((1..=x).map(|n| sieve.mobius(n) as i64).sum())
}

/// Chebyshev ψ(x) = Σ_{n<=x} Λ(n) with compensated summation.
pub fn chebyshev_psi(x: u64, sieve: &SieveTable) -> Result<f64> {
    if x > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x,
            limit: sieve.limit(),
        });
    }
    let mut acc = KahanSum::new();
    for n in 2..=x {
        acc.add(sieve.mangoldt(n));
    }
    Ok(acc.value())
}

/// One row per primorial N_k = p_1 ... p_k.
#[derive(Debug, Clone)]
pub struct PrimorialRecord {
    pub k: usize,
    /// Exact N_k.
    pub primorial: BigUint,
    /// log N_k = Chebyshev θ(p_k), compensated.
    pub log_primorial: f64,
    /// Exact φ(N_k) = Π (p_j - 1).
    pub totient_of_primorial: BigUint,
}

/// Records for k = 1..=k_max, built incrementally in both exact and log space.
pub fn primorials(k_max: usize) -> Result<Vec<PrimorialRecord>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument(
            "primorials: k_max must be >= 1".into(),
        ));
    }
    let primes = first_primes(k_max);
    let mut out = Vec::with_capacity(k_max);
    let mut n = BigUint::from(1u32);
    let mut phi = BigUint::from(1u32);
    let mut log_n = KahanSum::new();
    for (i, &p) in primes.iter().enumerate() {
        n *= p;
        phi *= p - 1;
        log_n.add((p as f64).ln());
        out.push(PrimorialRecord {
            k: i + 1,
            primorial: n.clone(),
            log_primorial: log_n.value(),
            totient_of_primorial: phi.clone(),
        });
    }
    Ok(out)
}

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n, compensated.
pub fn harmonic_number(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "harmonic_number: n must be >= 1".into(),
        ));
    }
    let mut acc = KahanSum::new();
    for i in 1..=n {
        acc.add(1.0 / i as f64);
    }
    Ok(acc.value())
}

/// Natural log of an arbitrary-size integer, via the top 64 bits of the
/// mantissa; relative error is a few ulps even when the value overflows f64.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
