//! Python bindings: the sieve tables, torus integral reconstructions, the
//! truncated Euler product and the criterion sweeps, exposed as a small
//! extension module.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rhcrit_core::arith::{self, SieveTable};
use rhcrit_core::criteria;
use rhcrit_core::dirichlet::{self, ArithmeticFunction, Weight};
use rhcrit_core::torus::{self, TruncatedTorusPoint};

fn to_py_err(e: rhcrit_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An exact torus integral: the fraction `(numerator, denominator)` and the
/// reconstructed integer value.
type ExactIntegral = ((BigInt, BigInt), BigInt);

/// One criterion row: `(index, lhs, rhs, margin, verdict)`.
type CriterionRow = (u64, f64, f64, f64, String);

/// Immutable sieve of μ, φ, σ and smallest prime factors on `1..=limit`.
#[pyclass]
struct Sieve {
    inner: SieveTable,
}

#[pymethods]
impl Sieve {
    #[new]
    fn new(limit: u64) -> PyResult<Self> {
        Ok(Self {
            inner: SieveTable::build(limit).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    fn mobius(&self, n: u64) -> PyResult<i32> {
        self.check(n)?;
        Ok(self.inner.mobius(n))
    }

    fn totient(&self, n: u64) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.totient(n))
    }

    fn sigma(&self, n: u64) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.sigma(n))
    }

    fn mangoldt(&self, n: u64) -> PyResult<f64> {
        self.check(n)?;
        Ok(self.inner.mangoldt(n))
    }

    /// `(prime, exponent)` pairs of n.
    fn factor(&self, n: u64) -> PyResult<Vec<(u64, u32)>> {
        self.inner.factorize(n).map_err(to_py_err)
    }

    /// Mertens partial sum M(x).
    fn mertens(&self, x: u64) -> PyResult<i64> {
        arith::mertens(x, &self.inner).map_err(to_py_err)
    }

    /// Chebyshev partial sum psi(x).
    fn chebyshev_psi(&self, x: u64) -> PyResult<f64> {
        arith::chebyshev_psi(x, &self.inner).map_err(to_py_err)
    }

    fn check(&self, n: u64) -> PyResult<()> {
        if n == 0 || n > self.inner.limit() {
            return Err(PyValueError::new_err(format!(
                "n = {n} outside sieve range 1..={}",
                self.inner.limit()
            )));
        }
        Ok(())
    }
}

/// `(prime_index, exponent)` pairs of n, with 1-based prime indices.
#[pyfunction]
fn exponent_vector(n: u64) -> PyResult<Vec<(u32, u32)>> {
    Ok(arith::exponent_vector(n)
        .map_err(to_py_err)?
        .entries()
        .to_vec())
}

/// Harmonic number H_n, compensated summation.
#[pyfunction]
fn harmonic_number(n: u64) -> PyResult<f64> {
    arith::harmonic_number(n).map_err(to_py_err)
}

/// Torus integral of the μ kernel at target `a`, integer `beta >= 2`.
/// Returns `((num, den), mu)`: the exact integral value μ(a)/a^β as a
/// fraction, and the exactly reconstructed μ(a).
#[pyfunction]
fn torus_integral_mu(a: u64, beta: u32) -> PyResult<ExactIntegral> {
    let w = Weight::exact(beta).map_err(to_py_err)?;
    let r = torus::torus_integral_mu(a, &w).map_err(to_py_err)?;
    Ok(split_exact(&r))
}

/// Torus integral of the φ kernel at target `a`, integer `beta >= 3`.
/// Returns `((num, den), phi)` with exact reconstruction.
#[pyfunction]
fn torus_integral_phi(a: u64, beta: u32) -> PyResult<ExactIntegral> {
    let w = Weight::exact(beta).map_err(to_py_err)?;
    let r = torus::torus_integral_phi(a, &w).map_err(to_py_err)?;
    Ok(split_exact(&r))
}

fn split_exact(r: &torus::TorusIntegralResult) -> ExactIntegral {
    let value = r.value.as_exact().expect("exact weight");
    let rec = r.reconstructed.as_exact().expect("exact weight");
    debug_assert!(rec.is_integer());
    (
        (value.numer().clone(), value.denom().clone()),
        rec.to_integer(),
    )
}

/// Torus integral reconstruction of Λ(n) (a float: log p for prime powers).
#[pyfunction]
fn torus_integral_mangoldt(n: u64, beta: u32) -> PyResult<f64> {
    let w = Weight::exact(beta).map_err(to_py_err)?;
    Ok(torus::torus_integral_mangoldt(n, &w)
        .map_err(to_py_err)?
        .reconstructed
        .to_f64())
}

/// Truncated Euler product over the first `prime_count` primes at t = 1.
#[pyfunction]
fn euler_product(beta: f64, prime_count: usize) -> PyResult<f64> {
    let w = Weight::new(beta).map_err(to_py_err)?;
    let t = TruncatedTorusPoint::all_ones(prime_count);
    Ok(torus::euler_product_partial(&w, &t, prime_count)
        .map_err(to_py_err)?
        .re)
}

/// Dirichlet convolution of two real-valued functions given as lists
/// indexed by n - 1.
#[pyfunction]
fn convolve(f: Vec<f64>, g: Vec<f64>) -> PyResult<Vec<f64>> {
    let limit = f.len().min(g.len()) as u64;
    let fa = ArithmeticFunction::from_reals(f).map_err(to_py_err)?;
    let ga = ArithmeticFunction::from_reals(g).map_err(to_py_err)?;
    let conv = dirichlet::convolve(&fa, &ga, limit).map_err(to_py_err)?;
    Ok(conv.as_reals().unwrap().to_vec())
}

/// Nicolas sweep for k = 2..=k_max; rows are
/// `(k, lhs, rhs, margin, verdict)` with log-space sides.
#[pyfunction]
#[pyo3(signature = (k_max, tolerance = 1e-9))]
fn nicolas_check(k_max: usize, tolerance: f64) -> PyResult<Vec<CriterionRow>> {
    let recs = criteria::nicolas_check(k_max, tolerance).map_err(to_py_err)?;
    Ok(recs
        .iter()
        .map(|r| {
            (
                r.index,
                r.lhs,
                r.rhs,
                r.margin,
                r.verdict.as_str().to_string(),
            )
        })
        .collect())
}

/// Lagarias sweep for n = 1..=n_max against a shared sieve.
#[pyfunction]
#[pyo3(signature = (n_max, tolerance = 1e-9))]
fn lagarias_check(n_max: u64, tolerance: f64) -> PyResult<Vec<CriterionRow>> {
    let sieve = SieveTable::build(n_max).map_err(to_py_err)?;
    let recs = criteria::lagarias_check(n_max, tolerance, &sieve).map_err(to_py_err)?;
    Ok(recs
        .iter()
        .map(|r| {
            (
                r.index,
                r.lhs,
                r.rhs,
                r.margin,
                r.verdict.as_str().to_string(),
            )
        })
        .collect())
}

#[pymodule]
fn rhcrit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sieve>()?;
    m.add_function(wrap_pyfunction!(exponent_vector, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_number, m)?)?;
    m.add_function(wrap_pyfunction!(torus_integral_mu, m)?)?;
    m.add_function(wrap_pyfunction!(torus_integral_phi, m)?)?;
    m.add_function(wrap_pyfunction!(torus_integral_mangoldt, m)?)?;
    m.add_function(wrap_pyfunction!(euler_product, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(nicolas_check, m)?)?;
    m.add_function(wrap_pyfunction!(lagarias_check, m)?)?;
    m.add("EULER_MASCHERONI", rhcrit_core::EULER_MASCHERONI)?;
    Ok(())
}
