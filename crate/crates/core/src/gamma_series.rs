//! The Gamma expansion.
//!
//! Substituting `x = -log(1-t)` gives `Γ(s+1) = ∫₀¹ (-log(1-t))^s dt`, and
//!
//! ```text
//! (-log(1-t))^s = t^s (1 + Σ_{α≥1} t^α Σ_{β=1}^{α} (s)_β c(α,β)/(α+β)!)
//! ```
//!
//! where `c(α,β) = Σ_{k=1}^{β} (-1)^{β-k} [α+k k] C(α+β, β-k)` and
//! `α!/(α+β)! · c(α,β)` is the Bell value `B_{α,β}(1/2, 2!/3, 3!/4, …)`.
//! Integrating term by term,
//!
//! ```text
//! Γ(s+1) = 1/(s+1) + Σ_{α≥1} 1/(s+α+1) Σ_{β=1}^{α} (s)_β c(α,β)/(α+β)!
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::bell::TruncatedSeries;
use crate::error::{Error, Result};
use crate::number::{
    at, binomial, factorial, falling_factorial_exact, stirling_first, table, Family, Rational,
    RowStream, Triangle,
};
use crate::precise::{falling_weighted_sum, log_magnitude_bound, working_bits, Fixed};
use crate::reference::gamma_ref;
use crate::report::{Path, SeriesReport, Target};

/// Closest approach to a pole `s = -(α+1)` that is still evaluated.
pub const POLE_GUARD: f64 = 1e-12;

/// Row `α` of the `c` triangle from row `α-1`:
/// `c(α,β) = (α+β-1)(c(α-1,β) + c(α-1,β-1))`, `c(0,0) = 1`.
pub(crate) fn c_row(alpha: usize, prev: &[BigInt]) -> Vec<BigInt> {
    if alpha == 0 {
        return vec![BigInt::one()];
    }
    (0..=alpha as isize)
        .map(|b| BigInt::from(alpha as isize + b - 1) * (at(prev, b) + at(prev, b - 1)))
        .collect()
}

/// `c(α,β)` straight from its defining alternating sum.
pub fn c_direct(alpha: usize, beta: usize) -> BigInt {
    if alpha == 0 {
        return if beta == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    (1..=beta)
        .map(|k| {
            let term = stirling_first(alpha + k, k) * binomial(alpha + beta, beta - k);
            if (beta - k).is_multiple_of(2) {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// The `c` triangle through row `max_row`, built by its recurrence.
pub fn c_table(max_row: usize) -> Arc<Triangle> {
    table(Family::C, max_row)
}

/// `α!/(α+β)! · c(α,β)`, the value of `B_{α,β}(1/2, 2!/3, 3!/4, …)`.
pub fn bell_value_log(alpha: usize, beta: usize) -> Rational {
    let c = c_table(alpha).get(alpha, beta).clone();
    Rational::new(factorial(alpha) * c, factorial(alpha + beta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEvalConfig {
    pub s: Complex64,
    /// Number of `α`-terms after the leading `1/(s+1)`.
    pub terms: usize,
    pub path: Path,
}

impl GammaEvalConfig {
    pub fn new(s: Complex64, terms: usize, path: Path) -> Self {
        Self { s, terms, path }
    }
}

fn check_domain(s: Complex64, terms: usize) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("s = {s} is not finite")));
    }
    if s.re <= -1.0 {
        return Err(Error::Domain(format!(
            "the Gamma integral needs Re s > -1, got {s}"
        )));
    }
    for alpha in 0..=terms {
        let distance = (s + (alpha + 1) as f64).norm();
        if distance < POLE_GUARD {
            return Err(Error::PoleProximity { s, distance });
        }
    }
    Ok(())
}

fn precision(s: Complex64, terms: usize) -> (u64, f64) {
    let log_peak = log_magnitude_bound(
        s,
        terms,
        1,
        |n| n + 1,
        |n, k| {
            let d = (n + k) as f64;
            ((d - 1.0) / d, 1.0 / d)
        },
    );
    (
        working_bits(log_peak, terms),
        log_peak / std::f64::consts::LN_2,
    )
}

/// Inner sums `Σ_β (s)_β c(α,β)/(α+β)!` for `α = 1..=terms`.
fn inner_sums(s: Complex64, terms: usize, path: Path, bits: u64) -> Vec<Complex64> {
    let sf = Fixed::from_complex(s, bits);
    match path {
        Path::Direct => RowStream::new(Family::C)
            .enumerate()
            .skip(1)
            .take(terms)
            .map(|(alpha, row)| falling_weighted_sum(&row, alpha, alpha, &sf).to_complex())
            .collect(),
        Path::Recurrence => {
            // g(α,β) = ((α+β-1) g(α-1,β) + (s-β+1) g(α-1,β-1)) / (α+β)
            let mut prev = vec![Fixed::from_int(&BigInt::one(), bits)];
            let mut out = Vec::with_capacity(terms);
            for alpha in 1..=terms {
                let mut row = vec![Fixed::zero(bits); alpha + 1];
                let mut sum = Fixed::zero(bits);
                for beta in 1..=alpha {
                    let mut acc = sf.sub_small(beta as u64 - 1).mul(&prev[beta - 1]);
                    if let Some(keep) = prev.get(beta) {
                        acc = &acc + &keep.mul_small((alpha + beta - 1) as u64);
                    }
                    row[beta] = acc.div_small((alpha + beta) as u64);
                    sum = &sum + &row[beta];
                }
                out.push(sum.to_complex());
                prev = row;
            }
            out
        }
    }
}

/// Partial sums of the Gamma expansion at `cfg.s`, compared with Γ(s+1).
pub fn gamma_expansion_eval(cfg: &GammaEvalConfig) -> Result<SeriesReport> {
    let s = cfg.s;
    check_domain(s, cfg.terms)?;
    let (bits, log2_peak) = precision(s, cfg.terms);
    let inner = inner_sums(s, cfg.terms, cfg.path, bits);

    let mut partial = Complex64::one() / (s + 1.0);
    let mut partial_sums = vec![partial];
    let mut term_magnitudes = Vec::with_capacity(cfg.terms);
    for (i, v) in inner.into_iter().enumerate() {
        let term = v / (s + (i + 2) as f64);
        partial += term;
        partial_sums.push(partial);
        term_magnitudes.push(term.norm());
    }
    let report = SeriesReport {
        target: Target::Gamma,
        s,
        terms: cfg.terms,
        path: cfg.path,
        partial_sums,
        term_magnitudes,
        reference: gamma_ref(s + 1.0)?,
        abs_error: 0.0,
        rel_error: 0.0,
        working_bits: bits,
        log2_peak_term: log2_peak,
    };
    Ok(report.finish())
}

/// Coefficients of `t^α` in `(-log(1-t))^s / t^s`, through `t^order`.
pub fn log_power_series_coeffs(s: Complex64, order: usize) -> TruncatedSeries<Complex64> {
    let (bits, _) = precision(s, order);
    let mut coeffs = vec![Complex64::one()];
    coeffs.extend(inner_sums(s, order, Path::Direct, bits));
    TruncatedSeries::new(coeffs)
}

/// Exact version of [`log_power_series_coeffs`] for rational `s`.
pub fn log_power_series_exact(s: &Rational, order: usize) -> TruncatedSeries<Rational> {
    let c = c_table(order);
    let coeffs = (0..=order)
        .map(|alpha| {
            if alpha == 0 {
                return Rational::one();
            }
            (1..=alpha).fold(Rational::zero(), |acc, beta| {
                acc + falling_factorial_exact(s, beta)
                    * Rational::new(c.get(alpha, beta).clone(), factorial(alpha + beta))
            })
        })
        .collect();
    TruncatedSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{partial_bell, series_pow_exact, SequenceSpec};
    use crate::number::double_factorial_odd;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn printed_table() {
        let t = c_table(5);
        assert_eq!(t.row(0).unwrap(), &ints(&[1])[..]);
        assert_eq!(t.row(1).unwrap(), &ints(&[0, 1])[..]);
        assert_eq!(t.row(2).unwrap(), &ints(&[0, 2, 3])[..]);
        assert_eq!(t.row(3).unwrap(), &ints(&[0, 6, 20, 15])[..]);
        assert_eq!(t.row(4).unwrap(), &ints(&[0, 24, 130, 210, 105])[..]);
        assert_eq!(
            t.row(5).unwrap(),
            &ints(&[0, 120, 924, 2380, 2520, 945])[..]
        );
    }

    #[test]
    fn direct_values() {
        assert_eq!(c_direct(2, 1), BigInt::from(2));
        assert_eq!(c_direct(3, 2), BigInt::from(20));
        assert_eq!(c_direct(5, 5), BigInt::from(945));
        for a in 1..8 {
            assert_eq!(c_direct(a, 0), BigInt::zero());
        }
        let bell = partial_bell(6, 3, &SequenceSpec::log_gamma(6)).unwrap();
        let via_bell = bell * Rational::new(factorial(9), factorial(6));
        assert_eq!(Rational::from_integer(c_direct(6, 3)), via_bell);
        assert_eq!(c_direct(6, 3), c_table(6).get(6, 3).clone());
    }

    #[test]
    fn recurrence_matches_definition() {
        let t = c_table(24);
        for a in 0..=24 {
            for b in 0..=a + 1 {
                assert_eq!(c_direct(a, b), t.get(a, b).clone(), "c({a},{b})");
            }
        }
    }

    #[test]
    fn diagonal_and_first_column() {
        let t = c_table(12);
        for a in 1..=12 {
            assert_eq!(t.get(a, a), &double_factorial_odd(a));
            assert_eq!(t.get(a, 1), &factorial(a));
        }
    }

    #[test]
    fn bell_values() {
        assert_eq!(bell_value_log(2, 2), Rational::new(1.into(), 4.into()));
        assert_eq!(bell_value_log(1, 1), Rational::new(1.into(), 2.into()));
        let xs = SequenceSpec::log_gamma(10);
        for a in 1..=10 {
            for b in 1..=a {
                assert_eq!(bell_value_log(a, b), partial_bell(a, b, &xs).unwrap());
            }
        }
    }

    #[test]
    fn zero_argument_gives_one() {
        let r = gamma_expansion_eval(&GammaEvalConfig::new(c(0.0, 0.0), 5, Path::Direct)).unwrap();
        assert_eq!(r.value(), c(1.0, 0.0));
        assert_eq!(r.abs_error, 0.0);
    }

    #[test]
    fn converges_towards_gamma() {
        let r =
            gamma_expansion_eval(&GammaEvalConfig::new(c(1.5, 0.0), 200, Path::Direct)).unwrap();
        assert!((r.reference.re - 1.329_340_388_179_137).abs() < 1e-14);
        assert!(r.rel_error < r.rel_error_at(50));
        assert!(r.rel_error < 0.02);
        let one = gamma_expansion_eval(&GammaEvalConfig::new(c(1.0, 0.0), 100, Path::Recurrence))
            .unwrap();
        // at s = 1 the tail is Σ_{α>N} 1/((α+1)(α+2)) = 1/(N+2)
        assert!((one.value().re - (1.0 - 1.0 / 102.0)).abs() < 1e-14);
    }

    #[test]
    fn paths_agree() {
        for s in [c(0.5, 0.0), c(1.0, 1.0), c(2.3, 0.0)] {
            let a = gamma_expansion_eval(&GammaEvalConfig::new(s, 50, Path::Direct)).unwrap();
            let b = gamma_expansion_eval(&GammaEvalConfig::new(s, 50, Path::Recurrence)).unwrap();
            for (x, y) in a.partial_sums.iter().zip(&b.partial_sums) {
                assert!((x - y).norm() <= 1e-12 * y.norm(), "{s}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        let r = gamma_expansion_eval(&GammaEvalConfig::new(c(-1.5, 0.0), 5, Path::Direct));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn log_power_coefficients() {
        let s = c(0.8, -0.3);
        let series = log_power_series_coeffs(s, 2);
        assert!((series.coeff(1) - s / 2.0).norm() < 1e-15);
        let second = s * (2.0 / 6.0) + s * (s - 1.0) * (3.0 / 24.0);
        assert!((series.coeff(2) - second).norm() < 1e-15);
    }

    #[test]
    fn integer_power_is_exact_cube() {
        let order = 10;
        let base = TruncatedSeries::new(
            (0..=order)
                .map(|k| Rational::new(BigInt::one(), BigInt::from(k + 1)))
                .collect(),
        );
        let cube = &(&base * &base) * &base;
        let three = Rational::from_integer(BigInt::from(3));
        assert_eq!(log_power_series_exact(&three, order), cube);
        let two = Rational::from_integer(BigInt::from(2));
        assert_eq!(
            log_power_series_exact(&two, 6),
            series_pow_exact(&base, &two, 6).unwrap()
        );
    }
}
