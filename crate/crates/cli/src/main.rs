//! `rhcrit` — criterion sweeps and torus-integral verification from the
//! command line, emitting plot-ready CSV or JSON reports.
//!
//! Exit codes: 0 success with no failed checks, 1 at least one row failed,
//! 2 usage error, 3 resource limit exceeded.

mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rhcrit_core::arith::{chebyshev_psi, mertens, primes_up_to, SieveTable, DEFAULT_SIEVE_CAP};
use rhcrit_core::criteria::{
    inequality_one_check, lagarias_check, littlewood_diagnostic, nicolas_check, prop1_consistency,
    Verdict,
};
use rhcrit_core::dirichlet::{convolve, mobius_invert, ArithmeticFunction, Weight};
use rhcrit_core::torus::{
    euler_product_partial, mangoldt_quadrature, smooth_sum_partial,
    torus_integral_mangoldt_from_factors, torus_integral_mu_from_factors,
    torus_integral_phi_from_factors, TruncatedTorusPoint,
};
use rhcrit_core::Error as CoreError;

use report::{fmt_f64, CheckRow, EulerRow, GrowthRow, MertensRow, Meta, PsiRow, Report, RowSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "rhcrit",
    version,
    about = "Riemann-hypothesis criterion diagnostics"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Verdict tolerance: ties within this band are reported as
    /// indeterminate, and verification rows pass at this bound.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Worker threads for sweeps. Output is identical at any degree.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    parallelism: u64,

    /// Cap on sieve allocations.
    #[arg(long, global = true, env = "RHCRIT_SIEVE_CAP", default_value_t = DEFAULT_SIEVE_CAP)]
    sieve_cap: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Mertens partial sums M(x) on a logarithmic grid up to x-max.
    Mertens {
        #[arg(long)]
        x_max: u64,
    },
    /// Chebyshev psi(x) on a logarithmic grid up to x-max.
    Psi {
        #[arg(long)]
        x_max: u64,
    },
    /// Nicolas primorial inequality sweep over k = 2..=k-max.
    Nicolas {
        #[arg(long)]
        k_max: usize,
    },
    /// Torus-integral form of the primorial inequality, k = 2..=k-max.
    Ineq1 {
        #[arg(long)]
        k_max: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
        beta: u32,
    },
    /// Mertens growth ratios (diagnostic only, no verdicts).
    Littlewood {
        #[arg(long)]
        x_max: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        a_const: f64,
    },
    /// Lagarias divisor bound sweep over n = 1..=n-max.
    Lagarias {
        #[arg(long)]
        n_max: u64,
    },
    /// Exact identity of Mertens sums with closed-form torus integrals.
    Prop1 {
        #[arg(long, default_value_t = 1000)]
        x_max: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        beta: u32,
    },
    /// Exact torus reconstruction of mu, phi and Lambda up to a-max.
    VerifyTorus {
        #[arg(long)]
        a_max: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
        beta: u32,
        #[arg(long, default_value_t = 64)]
        nodes: u32,
    },
    /// Convolution identities and Moebius inversion up to limit.
    VerifyAlgebra {
        #[arg(long)]
        limit: u64,
    },
    /// Truncated Euler product against smooth-number enumeration at t = 1.
    EulerProduct {
        #[arg(long, default_value_t = 97)]
        prime_bound: u64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 10_000_000_000)]
        smooth_limit: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.parallelism as usize)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    let started = Instant::now();
    let rows = match pool.install(|| evaluate(&cli)) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                CoreError::SieveCapExceeded { .. } => 3,
                _ => 2,
            };
        }
    };
    let wall_ms = started.elapsed().as_millis() as u64;

    let report = Report::new(
        Meta {
            tool: "rhcrit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand_name(&cli.cmd).into(),
            config: config_echo(&cli),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            wall_ms,
        },
        rows,
    );

    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e}");
        return 2;
    }
    if report.summary.fails > 0 {
        1
    } else {
        0
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match cli.format {
        Format::Csv => report.write_csv(&mut out),
        Format::Json => report.write_json(&mut out),
    }
}

fn subcommand_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Mertens { .. } => "mertens",
        Cmd::Psi { .. } => "psi",
        Cmd::Nicolas { .. } => "nicolas",
        Cmd::Ineq1 { .. } => "ineq1",
        Cmd::Littlewood { .. } => "littlewood",
        Cmd::Lagarias { .. } => "lagarias",
        Cmd::Prop1 { .. } => "prop1",
        Cmd::VerifyTorus { .. } => "verify-torus",
        Cmd::VerifyAlgebra { .. } => "verify-algebra",
        Cmd::EulerProduct { .. } => "euler-product",
    }
}

fn config_echo(cli: &Cli) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("format".into(), format!("{:?}", cli.format).to_lowercase());
    m.insert("tolerance".into(), fmt_f64(cli.tolerance));
    m.insert("parallelism".into(), cli.parallelism.to_string());
    m.insert("sieve_cap".into(), cli.sieve_cap.to_string());
    match &cli.cmd {
        Cmd::Mertens { x_max } | Cmd::Psi { x_max } => {
            m.insert("x_max".into(), x_max.to_string());
        }
        Cmd::Nicolas { k_max } => {
            m.insert("k_max".into(), k_max.to_string());
        }
        Cmd::Ineq1 { k_max, beta } => {
            m.insert("k_max".into(), k_max.to_string());
            m.insert("beta".into(), beta.to_string());
        }
        Cmd::Littlewood {
            x_max,
            eps,
            a_const,
        } => {
            m.insert("x_max".into(), x_max.to_string());
            m.insert("eps".into(), fmt_f64(*eps));
            m.insert("a_const".into(), fmt_f64(*a_const));
        }
        Cmd::Lagarias { n_max } => {
            m.insert("n_max".into(), n_max.to_string());
        }
        Cmd::Prop1 { x_max, beta } => {
            m.insert("x_max".into(), x_max.to_string());
            m.insert("beta".into(), beta.to_string());
        }
        Cmd::VerifyTorus { a_max, beta, nodes } => {
            m.insert("a_max".into(), a_max.to_string());
            m.insert("beta".into(), beta.to_string());
            m.insert("nodes".into(), nodes.to_string());
        }
        Cmd::VerifyAlgebra { limit } => {
            m.insert("limit".into(), limit.to_string());
        }
        Cmd::EulerProduct {
            prime_bound,
            beta,
            smooth_limit,
        } => {
            m.insert("prime_bound".into(), prime_bound.to_string());
            m.insert("beta".into(), fmt_f64(*beta));
            m.insert("smooth_limit".into(), smooth_limit.to_string());
        }
    }
    m
}

/// Powers of two up to x_max, plus x_max itself.
fn log_grid(x_max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut x = 1u64;
    while x <= x_max {
        grid.push(x);
        if x > x_max / 2 {
            break;
        }
        x *= 2;
    }
    if *grid.last().unwrap() != x_max {
        grid.push(x_max);
    }
    grid
}

fn evaluate(cli: &Cli) -> Result<RowSet, CoreError> {
    let cap = cli.sieve_cap;
    let tol = cli.tolerance;
    match &cli.cmd {
        Cmd::Mertens { x_max } => {
            let sieve = SieveTable::build_with_cap(*x_max, cap)?;
            let rows = log_grid(*x_max)
                .into_iter()
                .map(|x| {
                    let m = mertens(x, &sieve)?;
                    Ok(MertensRow {
                        x,
                        mertens: m,
                        ratio_sqrt: m.unsigned_abs() as f64 / (x as f64).sqrt(),
                    })
                })
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok(RowSet::Mertens(rows))
        }
        Cmd::Psi { x_max } => {
            let sieve = SieveTable::build_with_cap(*x_max, cap)?;
            let rows = log_grid(*x_max)
                .into_iter()
                .map(|x| {
                    let psi = chebyshev_psi(x, &sieve)?;
                    Ok(PsiRow {
                        x,
                        psi,
                        delta: psi - x as f64,
                    })
                })
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok(RowSet::Psi(rows))
        }
        Cmd::Nicolas { k_max } => Ok(RowSet::Criteria(nicolas_check(*k_max, tol)?)),
        Cmd::Ineq1 { k_max, beta } => {
            Ok(RowSet::Criteria(inequality_one_check(*k_max, *beta, tol)?))
        }
        Cmd::Littlewood {
            x_max,
            eps,
            a_const,
        } => {
            let sieve = SieveTable::build_with_cap(*x_max, cap)?;
            let diag = littlewood_diagnostic(*x_max, *eps, *a_const, &sieve)?;
            let rows = (0..diag.x_grid.len())
                .map(|i| GrowthRow {
                    x: diag.x_grid[i],
                    mertens: diag.mertens[i],
                    ratio_sqrt: diag.ratio_sqrt[i],
                    ratio_eps: diag.ratio_eps[i],
                    ratio_exp: diag.ratio_exp[i],
                })
                .collect();
            Ok(RowSet::Growth(rows))
        }
        Cmd::Lagarias { n_max } => {
            let sieve = SieveTable::build_with_cap(*n_max, cap)?;
            Ok(RowSet::Criteria(lagarias_check(*n_max, tol, &sieve)?))
        }
        Cmd::Prop1 { x_max, beta } => {
            let sieve = SieveTable::build_with_cap(*x_max, cap)?;
            let rows = log_grid(*x_max)
                .into_iter()
                .map(|x| {
                    let deviation = prop1_consistency(x, *beta, &sieve)?;
                    Ok(CheckRow {
                        check: "prop1_torus_vs_mertens".into(),
                        index: x,
                        deviation,
                        bound: tol,
                        verdict: pass_verdict(deviation, tol),
                    })
                })
                .collect::<Result<Vec<_>, CoreError>>()?;
            Ok(RowSet::Checks(rows))
        }
        Cmd::VerifyTorus { a_max, beta, nodes } => verify_torus(*a_max, *beta, *nodes, tol, cap),
        Cmd::VerifyAlgebra { limit } => verify_algebra(*limit, tol, cap),
        Cmd::EulerProduct {
            prime_bound,
            beta,
            smooth_limit,
        } => {
            let primes = primes_up_to(*prime_bound);
            let weight = Weight::new(*beta)?;
            let t = TruncatedTorusPoint::all_ones(primes.len());
            let product = euler_product_partial(&weight, &t, primes.len())?;
            let sum = smooth_sum_partial(&primes, *beta, &t, *smooth_limit)?;
            let deviation = (product - sum.value).norm();
            // Analytic truncation tail plus a rounding allowance.
            let bound = sum.tail_bound + 1e-12;
            Ok(RowSet::Euler(vec![EulerRow {
                prime_bound: *prime_bound,
                prime_count: primes.len() as u64,
                beta: *beta,
                product: product.re,
                smooth_sum: sum.value.re,
                deviation,
                bound,
                verdict: pass_verdict(deviation, bound),
            }]))
        }
    }
}

fn pass_verdict(deviation: f64, bound: f64) -> Verdict {
    if deviation <= bound {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn verify_torus(
    a_max: u64,
    beta: u32,
    nodes: u32,
    tol: f64,
    cap: u64,
) -> Result<RowSet, CoreError> {
    let sieve = SieveTable::build_with_cap(a_max, cap)?;
    let weight = Weight::exact(beta)?;

    // Exact reconstruction sweeps; deviations are exact differences and must
    // come out identically zero. Reducing with max is order-independent, so
    // the result is the same at any parallelism degree.
    type DevAt<'a> = &'a (dyn Fn(u64, &[(u64, u32)]) -> Result<f64, CoreError> + Sync);
    let sweep = |dev_at: DevAt| {
        (1..=a_max)
            .into_par_iter()
            .map(|a| {
                let factors = sieve.factorize(a)?;
                Ok(dev_at(a, &factors)?.abs())
            })
            .try_reduce(|| 0.0f64, |x, y| Ok(x.max(y)))
    };

    let mu_dev = sweep(&|a, factors| {
        let r = torus_integral_mu_from_factors(a, factors, &weight)?;
        Ok(r.reconstructed.to_f64() - sieve.mobius(a) as f64)
    })?;
    let phi_dev = sweep(&|a, factors| {
        let r = torus_integral_phi_from_factors(a, factors, &weight)?;
        Ok(r.reconstructed.to_f64() - sieve.totient(a) as f64)
    })?;
    let mangoldt_dev = sweep(&|a, factors| {
        let r = torus_integral_mangoldt_from_factors(a, factors, &weight)?;
        Ok(r.reconstructed.to_f64() - sieve.mangoldt(a))
    })?;

    let mut rows = vec![
        CheckRow {
            check: "torus_mu_reconstruction".into(),
            index: a_max,
            deviation: mu_dev,
            bound: tol,
            verdict: Verdict::Holds,
        },
        CheckRow {
            check: "torus_phi_reconstruction".into(),
            index: a_max,
            deviation: phi_dev,
            bound: tol,
            verdict: Verdict::Holds,
        },
        CheckRow {
            check: "torus_mangoldt_reconstruction".into(),
            index: a_max,
            deviation: mangoldt_dev,
            bound: tol,
            verdict: Verdict::Holds,
        },
    ];

    // Derived Lambda closed form against circle quadrature, on the integral
    // scale, for prime powers p^m <= a_max with p <= 13, m <= 4.
    let mut quad_dev = 0.0f64;
    for p in [2u64, 3, 5, 7, 11, 13] {
        for m in 1..=4u32 {
            let n = p.pow(m);
            let closed = torus_integral_mangoldt_from_factors(n, &[(p, m)], &weight)?
                .value
                .to_f64();
            let quad = mangoldt_quadrature(n, beta as f64, nodes)?;
            quad_dev = quad_dev.max((closed - quad).abs());
        }
    }
    rows.push(CheckRow {
        check: "mangoldt_closed_vs_quadrature".into(),
        index: a_max,
        deviation: quad_dev,
        bound: tol,
        verdict: Verdict::Holds,
    });

    for row in &mut rows {
        row.verdict = pass_verdict(row.deviation, row.bound);
    }
    Ok(RowSet::Checks(rows))
}

fn verify_algebra(limit: u64, tol: f64, cap: u64) -> Result<RowSet, CoreError> {
    let sieve = SieveTable::build_with_cap(limit, cap)?;
    let ones = ArithmeticFunction::ones(limit);

    let mu = ArithmeticFunction::mobius(&sieve, limit)?;
    let mu_conv = convolve(&mu, &ones, limit)?;
    let unit = ArithmeticFunction::unit(limit);
    let mu_dev = max_abs_diff(&mu_conv, &unit, limit);

    let phi = ArithmeticFunction::totient(&sieve, limit)?;
    let phi_conv = convolve(&phi, &ones, limit)?;
    let id = ArithmeticFunction::id(limit);
    let phi_dev = max_abs_diff(&phi_conv, &id, limit);

    let lambda = ArithmeticFunction::mangoldt(&sieve, limit)?;
    let real_ones = ArithmeticFunction::from_reals(vec![1.0; limit as usize])?;
    let lambda_conv = convolve(&lambda, &real_ones, limit)?;
    let log = ArithmeticFunction::log(limit);
    let lambda_dev = max_abs_diff(&lambda_conv, &log, limit);

    // id ∗ 1 = σ, inverted back down to id. Values stay well under 2^53,
    // so the f64 comparison against the sieve is exact.
    let sigma_conv = convolve(&id, &ones, limit)?;
    let mut sigma_dev = 0.0f64;
    for n in 1..=limit {
        sigma_dev = sigma_dev.max((sigma_conv.value_f64(n) - sieve.sigma(n) as f64).abs());
    }
    let back = mobius_invert(&sigma_conv, &sieve, limit)?;
    let inv_dev = max_abs_diff(&back, &id, limit).max(sigma_dev);

    let rows = [
        "mu_conv_ones_is_unit",
        "phi_conv_ones_is_id",
        "mangoldt_conv_ones_is_log",
        "mobius_inversion_round_trip",
    ]
    .into_iter()
    .zip([mu_dev, phi_dev, lambda_dev, inv_dev])
    .map(|(check, deviation)| CheckRow {
        check: check.into(),
        index: limit,
        deviation,
        bound: tol,
        verdict: pass_verdict(deviation, tol),
    })
    .collect();
    Ok(RowSet::Checks(rows))
}

fn max_abs_diff(a: &ArithmeticFunction, b: &ArithmeticFunction, limit: u64) -> f64 {
    let mut dev = 0.0f64;
    for n in 1..=limit {
        dev = dev.max((a.value_f64(n) - b.value_f64(n)).abs());
    }
    dev
}
