//! The eta expansion.
//!
//! With `x = 1/(1+e^t)` the integral `∫₀^∞ t^{s-1}/(1+e^t) dt` becomes
//! `∫₀^{1/2} (log((1-x)/x))^{s-1} dx` after folding, and
//!
//! ```text
//! (log((1-x)/x))^r = 2^r u^r (1 + Σ_{n≥1} u^{2n} Σ_{k=1}^{n} b(2n,k)(r)_k/(2n+k)!),  u = 1-2x
//! ```
//!
//! which integrates to
//!
//! ```text
//! ζ(s)(1-2^{1-s})Γ(s) = 2^{s-1}/s · (1/(s+1) + Σ_{m≥1} 1/(s+2m+1) Σ_{k=1}^{m} b(2m,k)(s)_k/(2m+k)!)
//! ```

use std::f64::consts::LN_2;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::bell::TruncatedSeries;
use crate::error::{Error, Result};
use crate::mittag_leffler::a_table;
use crate::number::{
    at, binomial, factorial, falling_factorial_exact, table, Family, Rational, RowStream, Triangle,
};
use crate::precise::{falling_weighted_sum, log_magnitude_bound, working_bits, Fixed};
use crate::reference::{eta_gamma, left_integral_quadrature, QuadConfig};
use crate::report::{Path, SeriesReport, Target};

/// Row `α` of the `b` triangle from row `α-2`:
/// `b(α,β) = (α+β-2)(α+β-1)(b(α-2,β) + b(α-2,β-1))`, `b(0,0) = 1`.
pub(crate) fn b_row(alpha: usize, prev2: &[BigInt]) -> Vec<BigInt> {
    let width = Family::B.width(alpha);
    if alpha == 0 {
        let mut row = vec![BigInt::zero(); width];
        row[0] = BigInt::one();
        return row;
    }
    if alpha % 2 == 1 {
        return vec![BigInt::zero(); width];
    }
    (0..width as isize)
        .map(|k| {
            let d = alpha as isize + k;
            BigInt::from((d - 2) * (d - 1)) * (at(prev2, k) + at(prev2, k - 1))
        })
        .collect()
}

/// `b(α,β) = Σ_j (-1)^j C(α+β, j) a(α+β-j, β-j) / 2^{β-j}`.
pub fn b_direct(alpha: usize, beta: usize) -> Result<BigInt> {
    let a = a_table(alpha + beta);
    let mut total = BigInt::zero();
    for j in 0..=beta {
        let k = beta - j;
        let (q, r) = a.get(alpha + beta - j, k).div_rem(&(BigInt::one() << k));
        if !r.is_zero() {
            return Err(Error::Defect(format!(
                "a({}, {k}) is not divisible by 2^{k}",
                alpha + beta - j
            )));
        }
        let term = binomial(alpha + beta, j) * q;
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

pub fn b_table(max_row: usize) -> Arc<Triangle> {
    table(Family::B, max_row)
}

/// Coefficients of `u^{2n}`, `n = 0..=order`, inside the braces of the
/// expansion of `(log((1+u)/(1-u)))^r / (2u)^r`.
pub fn log_ratio_series(r: Complex64, order: usize) -> TruncatedSeries<Complex64> {
    let (bits, _) = precision(r, order);
    let mut coeffs = vec![Complex64::one()];
    coeffs.extend(inner_sums(r, order, Path::Direct, bits));
    TruncatedSeries::new(coeffs)
}

/// Exact version of [`log_ratio_series`] for rational `r`.
pub fn log_ratio_series_exact(r: &Rational, order: usize) -> TruncatedSeries<Rational> {
    let b = b_table(2 * order);
    let coeffs = (0..=order)
        .map(|n| {
            if n == 0 {
                return Rational::one();
            }
            (1..=n).fold(Rational::zero(), |acc, k| {
                acc + falling_factorial_exact(r, k)
                    * Rational::new(b.get(2 * n, k).clone(), factorial(2 * n + k))
            })
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEvalConfig {
    pub s: Complex64,
    /// Number of `m`-terms after the leading `1/(s+1)`.
    pub terms: usize,
    pub path: Path,
}

impl ZetaEvalConfig {
    pub fn new(s: Complex64, terms: usize, path: Path) -> Self {
        Self { s, terms, path }
    }
}

fn precision(s: Complex64, terms: usize) -> (u64, f64) {
    let log_peak = log_magnitude_bound(
        s,
        terms,
        2,
        |n| n / 2 + 1,
        |n, k| {
            let d = (n + k) as f64;
            ((d - 2.0) / d, 1.0 / d)
        },
    );
    (working_bits(log_peak, terms), log_peak / LN_2)
}

/// Inner sums `Σ_k (s)_k b(2m,k)/(2m+k)!` for `m = 1..=terms`.
fn inner_sums(s: Complex64, terms: usize, path: Path, bits: u64) -> Vec<Complex64> {
    let sf = Fixed::from_complex(s, bits);
    match path {
        Path::Direct => RowStream::new(Family::B)
            .step_by(2)
            .enumerate()
            .skip(1)
            .take(terms)
            .map(|(m, row)| falling_weighted_sum(&row, m, 2 * m, &sf).to_complex())
            .collect(),
        Path::Recurrence => {
            // z(n,k) = ((n+k-2) z(n-2,k) + (s-k+1) z(n-2,k-1)) / (n+k), n = 2m
            let mut prev = vec![Fixed::from_int(&BigInt::one(), bits)];
            let mut out = Vec::with_capacity(terms);
            for m in 1..=terms {
                let n = 2 * m;
                let mut row = vec![Fixed::zero(bits); m + 1];
                let mut sum = Fixed::zero(bits);
                for k in 1..=m {
                    let mut acc = sf.sub_small(k as u64 - 1).mul(&prev[k - 1]);
                    if let Some(keep) = prev.get(k) {
                        acc = &acc + &keep.mul_small((n + k - 2) as u64);
                    }
                    row[k] = acc.div_small((n + k) as u64);
                    sum = &sum + &row[k];
                }
                out.push(sum.to_complex());
                prev = row;
            }
            out
        }
    }
}

/// Partial sums of the eta expansion at `cfg.s`, compared with `η(s)Γ(s)`.
pub fn zeta_expansion_eval(cfg: &ZetaEvalConfig) -> Result<SeriesReport> {
    let s = cfg.s;
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("s = {s} is not finite")));
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "the eta integral needs Re s > 0, got {s}"
        )));
    }
    let (bits, log2_peak) = precision(s, cfg.terms);
    let inner = inner_sums(s, cfg.terms, cfg.path, bits);
    let lead = ((s - 1.0) * LN_2).exp() / s;

    let mut braces = Complex64::one() / (s + 1.0);
    let mut partial_sums = vec![lead * braces];
    let mut term_magnitudes = Vec::with_capacity(cfg.terms);
    for (i, v) in inner.into_iter().enumerate() {
        let term = v / (s + (2 * i + 3) as f64);
        braces += term;
        partial_sums.push(lead * braces);
        term_magnitudes.push((lead * term).norm());
    }
    let report = SeriesReport {
        target: Target::Zeta,
        s,
        terms: cfg.terms,
        path: cfg.path,
        partial_sums,
        term_magnitudes,
        reference: eta_gamma(s)?,
        abs_error: 0.0,
        rel_error: 0.0,
        working_bits: bits,
        log2_peak_term: log2_peak,
    };
    Ok(report.finish())
}

/// `∫₀^∞ t^{s-1}/(1+e^t) dt = η(s)Γ(s)` from the reference oracles.
pub fn left_integral_form(s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "integral diverges for Re s <= 0 (s = {s})"
        )));
    }
    eta_gamma(s)
}

/// The same integral by direct quadrature.
pub fn left_integral_by_quadrature(s: Complex64, tol: f64) -> Result<Complex64> {
    Ok(left_integral_quadrature(s, &QuadConfig::with_tol(tol))?.value)
}
