//! Evaluators for Riemann-hypothesis-equivalent statements at desk scale:
//! the Nicolas primorial inequality, its torus-integral form, Mertens growth
//! diagnostics, the torus/Mertens partial-sum identity, and the Lagarias
//! divisor bound.
//!
//! Asymptotic O(·) statements are rendered as diagnostics only; they are not
//! decidable from finite data, so no verdict is ever attached to them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{first_primes, ln_biguint, primorials, SieveTable};
use crate::dirichlet::Weight;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::torus::torus_integral_mu_from_factors;
use crate::EULER_MASCHERONI;

/// Default half-width of the numerically-indeterminate band around a tie.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    Nicolas,
    InequalityOne,
    LittlewoodEps,
    LittlewoodExp,
    Lagarias,
}

impl CriterionId {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::Nicolas => "nicolas",
            CriterionId::InequalityOne => "inequality_one",
            CriterionId::LittlewoodEps => "littlewood_eps",
            CriterionId::LittlewoodExp => "littlewood_exp",
            CriterionId::Lagarias => "lagarias",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    /// holds iff margin > tol, fails iff margin < -tol, indeterminate in the
    /// tie band |margin| <= tol.
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin.abs() <= tol {
            Verdict::Indeterminate
        } else if margin > 0.0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// One row of a criterion sweep. `lhs`/`rhs` are in log space where the
/// criterion is evaluated in log space (nicolas, inequality_one); the margin
/// is oriented so that positive means consistent with RH.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionRecord {
    pub criterion_id: CriterionId,
    pub index: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// Nicolas sweep in the orientation-safe ratio form,
/// log(N_k/φ(N_k)) > γ + log log log N_k, for k = 2..=k_max.
///
/// k = 1 is excluded by convention: log log N_1 = log log 2 < 0 flips the
/// fraction form of the inequality, so no verdict is meaningful there.
pub fn nicolas_check(k_max: usize, tol: f64) -> Result<Vec<CriterionRecord>> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(
            "nicolas_check: k_max must be >= 2".into(),
        ));
    }
    let primes = first_primes(k_max);
    let mut lhs = KahanSum::new(); // Σ log(p/(p-1)) = log(N_k/φ(N_k))
    let mut theta = KahanSum::new(); // Σ log p = log N_k
    let mut out = Vec::with_capacity(k_max - 1);
    for (i, &p) in primes.iter().enumerate() {
        lhs.add((1.0 / (p as f64 - 1.0)).ln_1p());
        theta.add((p as f64).ln());
        let k = i + 1;
        if k < 2 {
            continue;
        }
        let rhs = EULER_MASCHERONI + theta.value().ln().ln();
        let margin = lhs.value() - rhs;
        out.push(CriterionRecord {
            criterion_id: CriterionId::Nicolas,
            index: k as u64,
            lhs: lhs.value(),
            rhs,
            margin,
            verdict: Verdict::from_margin(margin, tol),
        });
    }
    Ok(out)
}

/// The Nicolas margin at a single k computed from exact big integers
/// (N_k and φ(N_k) multiplied out, logs taken at the end). Slow but
/// independent of the compensated prefix sums; used as a cross-check
/// for k up to a few hundred.
pub fn nicolas_exact_margin(k: usize) -> Result<f64> {
    let recs = primorials(k)?;
    let rec = recs.last().unwrap();
    let log_n = ln_biguint(&rec.primorial);
    let log_phi = ln_biguint(&rec.totient_of_primorial);
    Ok((log_n - log_phi) - EULER_MASCHERONI - log_n.ln().ln())
}

/// The torus-integral form of the primorial inequality:
/// φ(N_k)/N_k^β < 1/(e^γ N_k^{β-1} log log N_k), evaluated in log space for
/// k = 2..=k_max. The left side is exactly the closed-form torus integral
/// of the φ kernel at target N_k, Σ_j [log(p_j - 1) - β log p_j].
///
/// The verdict is required to coincide with [`nicolas_check`] at every k
/// (the two are the same inequality); a mismatch is reported as an error.
pub fn inequality_one_check(k_max: usize, beta: u32, tol: f64) -> Result<Vec<CriterionRecord>> {
    if beta < 3 {
        return Err(Error::BetaTooSmall {
            beta: beta as f64,
            min: 2.0,
        });
    }
    if k_max < 2 {
        return Err(Error::InvalidArgument(
            "inequality_one_check: k_max must be >= 2".into(),
        ));
    }
    let primes = first_primes(k_max);
    let betaf = beta as f64;
    let mut lhs = KahanSum::new(); // Σ [log(p-1) - β log p] = log(φ(N_k)/N_k^β)
    let mut theta = KahanSum::new();
    let mut nicolas_lhs = KahanSum::new();
    let mut out = Vec::with_capacity(k_max - 1);
    for (i, &p) in primes.iter().enumerate() {
        let pf = p as f64;
        lhs.add((pf - 1.0).ln() - betaf * pf.ln());
        theta.add(pf.ln());
        nicolas_lhs.add((1.0 / (pf - 1.0)).ln_1p());
        let k = i + 1;
        if k < 2 {
            continue;
        }
        let loglog = theta.value().ln().ln();
        let rhs = -EULER_MASCHERONI - (betaf - 1.0) * theta.value() - loglog;
        let margin = rhs - lhs.value();
        let verdict = Verdict::from_margin(margin, tol);
        let nicolas_verdict =
            Verdict::from_margin(nicolas_lhs.value() - (EULER_MASCHERONI + loglog), tol);
        if verdict != nicolas_verdict {
            return Err(Error::Inconsistency(format!(
                "inequality (1) verdict {} disagrees with nicolas verdict {} at k = {k}",
                verdict.as_str(),
                nicolas_verdict.as_str()
            )));
        }
        out.push(CriterionRecord {
            criterion_id: CriterionId::InequalityOne,
            index: k as u64,
            lhs: lhs.value(),
            rhs,
            margin,
            verdict,
        });
    }
    Ok(out)
}

/// Mertens growth ratios sampled on a logarithmic grid plus every point
/// where |M(x)| reaches a new record. Diagnostic only — the underlying
/// O(·) statements carry no finite-data verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthDiagnostic {
    pub x_grid: Vec<u64>,
    pub mertens: Vec<i64>,
    /// |M(x)| / x^{1/2}
    pub ratio_sqrt: Vec<f64>,
    /// |M(x)| / x^{1/2 + ε}
    pub ratio_eps: Vec<f64>,
    /// |M(x)| / (x^{1/2} exp(A log x / log log x))
    pub ratio_exp: Vec<f64>,
}

pub fn littlewood_diagnostic(
    x_max: u64,
    eps: f64,
    growth_a: f64,
    sieve: &SieveTable,
) -> Result<GrowthDiagnostic> {
    if x_max == 0 || x_max > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x: x_max,
            limit: sieve.limit(),
        });
    }
    if eps <= 0.0 || growth_a <= 0.0 {
        return Err(Error::InvalidArgument(
            "littlewood: eps and A must be positive".into(),
        ));
    }
    let mut diag = GrowthDiagnostic {
        x_grid: Vec::new(),
        mertens: Vec::new(),
        ratio_sqrt: Vec::new(),
        ratio_eps: Vec::new(),
        ratio_exp: Vec::new(),
    };
    let mut m = 0i64;
    let mut record = -1i64;
    for x in 1..=x_max {
        m += sieve.mobius(x) as i64;
        let abs_m = m.abs();
        let on_grid = x & (x - 1) == 0 || x == x_max;
        let is_record = abs_m > record;
        if is_record {
            record = abs_m;
        }
        if !(on_grid || is_record) {
            continue;
        }
        let xf = x as f64;
        let abs_mf = abs_m as f64;
        diag.x_grid.push(x);
        diag.mertens.push(m);
        diag.ratio_sqrt.push(abs_mf / xf.sqrt());
        diag.ratio_eps.push(abs_mf / xf.powf(0.5 + eps));
        diag.ratio_exp
            .push(abs_mf / (xf.sqrt() * (growth_a * xf.ln() / xf.ln().ln()).exp()));
    }
    Ok(diag)
}

/// Scans 1..=x_max for the first x with M(x)^2 > x, exact integer
/// arithmetic throughout. Returns None when the square-root bound holds
/// everywhere; a Some is a reportable event, not an error.
pub fn mertens_sqrt_violation(x_max: u64, sieve: &SieveTable) -> Result<Option<u64>> {
    if x_max == 0 || x_max > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x: x_max,
            limit: sieve.limit(),
        });
    }
    let mut m = 0i64;
    for x in 1..=x_max {
        m += sieve.mobius(x) as i64;
        if m * m > x as i64 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Term-by-term consistency of the Mertens partial sum with the closed-form
/// torus integrals: Σ_{a<=x'} a^β I(a) must equal M(x') exactly, for every
/// prefix x' <= x. Returns the maximum absolute deviation, which is exactly
/// zero in exact mode.
pub fn prop1_consistency(x: u64, beta: u32, sieve: &SieveTable) -> Result<f64> {
    if beta < 2 {
        return Err(Error::BetaTooSmall {
            beta: beta as f64,
            min: 1.0,
        });
    }
    if x == 0 || x > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x,
            limit: sieve.limit(),
        });
    }
    let weight = Weight::exact(beta)?;
    let mut torus_sum = BigRational::zero();
    let mut mertens_sum = 0i64;
    let mut max_dev = 0.0f64;
    for a in 1..=x {
        let factors = sieve.factorize(a)?;
        let r = torus_integral_mu_from_factors(a, &factors, &weight)?;
        torus_sum += r.reconstructed.as_exact().expect("exact weight");
        mertens_sum += sieve.mobius(a) as i64;
        let dev = (&torus_sum - BigRational::from_integer(BigInt::from(mertens_sum)))
            .abs()
            .to_f64()
            .unwrap_or(f64::NAN);
        max_dev = max_dev.max(dev);
    }
    Ok(max_dev)
}

/// Lagarias divisor bound σ(n) < H_n + e^{H_n} log H_n for n = 1..=n_max.
/// At n = 1 both sides equal 1; the zero margin lands in the indeterminate
/// band, which is the intended reading of the boundary case.
pub fn lagarias_check(n_max: u64, tol: f64, sieve: &SieveTable) -> Result<Vec<CriterionRecord>> {
    if n_max == 0 || n_max > sieve.limit() {
        return Err(Error::OutOfSieveRange {
            x: n_max,
            limit: sieve.limit(),
        });
    }
    let mut harmonic = Vec::with_capacity(n_max as usize);
    let mut acc = KahanSum::new();
    for n in 1..=n_max {
        acc.add(1.0 / n as f64);
        harmonic.push(acc.value());
    }
    let records: Vec<CriterionRecord> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let h = harmonic[n as usize - 1];
            let lhs = sieve.sigma(n) as f64;
            let rhs = h + h.exp() * h.ln();
            let margin = rhs - lhs;
            CriterionRecord {
                criterion_id: CriterionId::Lagarias,
                index: n,
                lhs,
                rhs,
                margin,
                verdict: Verdict::from_margin(margin, tol),
            }
        })
        .collect();
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mertens;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nicolas_small_k_examples() {
        let recs = nicolas_check(4, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(recs.len(), 3);
        // k = 2: N = 6, ratio 3 against e^γ loglog 6 ≈ 1.0387.
        let k2 = &recs[0];
        assert_eq!(k2.index, 2);
        assert_abs_diff_eq!(k2.lhs.exp(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            k2.rhs,
            EULER_MASCHERONI + 6f64.ln().ln().ln(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(k2.rhs.exp(), 1.0387, epsilon = 1e-3);
        assert_eq!(k2.verdict, Verdict::Holds);
        // k = 4: N = 210, ratio 4.375 against ≈ 2.986.
        let k4 = &recs[2];
        assert_abs_diff_eq!(k4.lhs.exp(), 4.375, epsilon = 1e-12);
        assert_abs_diff_eq!(k4.rhs.exp(), 2.986, epsilon = 1e-3);
        assert_eq!(k4.verdict, Verdict::Holds);
    }

    #[test]
    fn nicolas_rejects_k_below_two() {
        assert!(nicolas_check(1, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn nicolas_log_space_matches_exact_integers() {
        let recs = nicolas_check(50, DEFAULT_TOLERANCE).unwrap();
        for rec in &recs {
            let exact = nicolas_exact_margin(rec.index as usize).unwrap();
            assert_abs_diff_eq!(rec.margin, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn nicolas_lhs_strictly_increasing() {
        let recs = nicolas_check(500, DEFAULT_TOLERANCE).unwrap();
        for pair in recs.windows(2) {
            assert!(pair[1].lhs > pair[0].lhs);
        }
    }

    #[test]
    fn inequality_one_small_k_examples() {
        let recs = inequality_one_check(3, 3, DEFAULT_TOLERANCE).unwrap();
        // k = 2: lhs = φ(6)/6^3 = 2/216.
        let k2 = &recs[0];
        assert_abs_diff_eq!(k2.lhs.exp(), 2.0 / 216.0, epsilon = 1e-15);
        assert_eq!(k2.verdict, Verdict::Holds);
        // k = 3: lhs = 8/27000 ≈ 2.963e-4 < rhs ≈ 5.097e-4.
        let k3 = &recs[1];
        assert_abs_diff_eq!(k3.lhs.exp(), 8.0 / 27000.0, epsilon = 1e-15);
        let loglog30 = 30f64.ln().ln();
        let rhs_linear = 1.0 / (EULER_MASCHERONI.exp() * 900.0 * loglog30);
        assert_abs_diff_eq!(k3.rhs.exp(), rhs_linear, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs_linear, 5.0966e-4, epsilon = 1e-7);
        assert_eq!(k3.verdict, Verdict::Holds);
    }

    #[test]
    fn inequality_one_rejects_small_beta() {
        assert!(matches!(
            inequality_one_check(10, 2, DEFAULT_TOLERANCE),
            Err(Error::BetaTooSmall { .. })
        ));
    }

    #[test]
    fn verdicts_match_nicolas_for_both_betas() {
        for beta in [3u32, 4] {
            let ineq = inequality_one_check(100, beta, DEFAULT_TOLERANCE).unwrap();
            let nic = nicolas_check(100, DEFAULT_TOLERANCE).unwrap();
            assert_eq!(ineq.len(), nic.len());
            for (a, b) in ineq.iter().zip(&nic) {
                assert_eq!(a.index, b.index);
                assert_eq!(a.verdict, b.verdict, "k = {}", a.index);
            }
        }
    }

    #[test]
    fn littlewood_diagnostic_basics() {
        let sieve = SieveTable::build(10_000).unwrap();
        let diag = littlewood_diagnostic(10_000, 0.1, 1.0, &sieve).unwrap();
        assert_eq!(diag.x_grid[0], 1);
        assert_eq!(diag.ratio_sqrt[0], 1.0);
        assert_eq!(diag.ratio_eps[0], 1.0);
        assert_eq!(diag.ratio_exp[0], 1.0);
        for pair in diag.x_grid.windows(2) {
            assert!(pair[1] > pair[0]);
        }
        for (&x, &m) in diag.x_grid.iter().zip(&diag.mertens) {
            // Running accumulation vs direct summation.
            assert_eq!(m, mertens(x, &sieve).unwrap(), "x = {x}");
        }
        assert!(diag.ratio_sqrt.iter().all(|&r| r >= 0.0));
        assert_eq!(*diag.x_grid.last().unwrap(), 10_000);
    }

    #[test]
    fn littlewood_is_pure_in_the_grid() {
        let sieve = SieveTable::build(4096).unwrap();
        let a = littlewood_diagnostic(4096, 0.2, 1.5, &sieve).unwrap();
        let b = littlewood_diagnostic(2048, 0.2, 1.5, &sieve).unwrap();
        for (i, &x) in b.x_grid.iter().enumerate() {
            if let Some(j) = a.x_grid.iter().position(|&y| y == x) {
                assert_eq!(a.ratio_sqrt[j], b.ratio_sqrt[i]);
                assert_eq!(a.ratio_exp[j], b.ratio_exp[i]);
            }
        }
    }

    #[test]
    fn prop1_exact_zero() {
        let sieve = SieveTable::build(1000).unwrap();
        assert_eq!(prop1_consistency(1, 2, &sieve).unwrap(), 0.0);
        assert_eq!(prop1_consistency(10, 3, &sieve).unwrap(), 0.0);
        assert_eq!(mertens(10, &sieve).unwrap(), -1);
    }

    #[test]
    fn lagarias_examples() {
        let sieve = SieveTable::build(100).unwrap();
        let recs = lagarias_check(12, DEFAULT_TOLERANCE, &sieve).unwrap();
        // n = 1 is the boundary equality case.
        assert_eq!(recs[0].verdict, Verdict::Indeterminate);
        assert!(recs[0].margin.abs() <= 1e-12);
        // n = 6: σ = 12 < 2.45 + e^{2.45} log 2.45 ≈ 12.834.
        let n6 = &recs[5];
        assert_eq!(n6.lhs, 12.0);
        let h6 = 2.45f64;
        assert_abs_diff_eq!(n6.rhs, h6 + h6.exp() * h6.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(n6.rhs, 12.834, epsilon = 1e-3);
        assert_eq!(n6.verdict, Verdict::Holds);
        // n = 12: σ = 28, still holds.
        let n12 = &recs[11];
        assert_eq!(n12.lhs, 28.0);
        assert_eq!(n12.verdict, Verdict::Holds);
    }

    #[test]
    fn mertens_scan_clean_to_ten_thousand() {
        let sieve = SieveTable::build(10_000).unwrap();
        assert_eq!(mertens_sqrt_violation(10_000, &sieve).unwrap(), None);
    }

    #[test]
    fn verdict_banding() {
        let tol = 1e-9;
        assert_eq!(Verdict::from_margin(1e-3, tol), Verdict::Holds);
        assert_eq!(Verdict::from_margin(-1e-3, tol), Verdict::Fails);
        assert_eq!(Verdict::from_margin(0.0, tol), Verdict::Indeterminate);
        assert_eq!(Verdict::from_margin(1e-9, tol), Verdict::Indeterminate);
        assert_eq!(Verdict::from_margin(-1e-9, tol), Verdict::Indeterminate);
        assert_eq!(Verdict::from_margin(1.1e-9, tol), Verdict::Holds);
    }
}
