//! Exponential partial Bell polynomials, potential polynomials and truncated
//! power series over exact rationals or complex doubles.
//!
//! These are generic: they know nothing about the special sequences used by
//! the Gamma and zeta expansions, which is what makes them usable as an
//! independent check on the closed forms in [`crate::gamma_series`] and
//! [`crate::zeta_series`].

use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::{binomial, factorial, falling_factorial, falling_factorial_exact, Rational};

/// A named sequence `x₁, x₂, …` fed to the Bell polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub name: String,
    /// `terms[m - 1]` holds `x_m`.
    pub terms: Vec<Rational>,
}

impl SequenceSpec {
    pub fn new(name: impl Into<String>, terms: Vec<Rational>) -> Self {
        Self {
            name: name.into(),
            terms,
        }
    }

    /// `x_m = m!/(m+1)`: the coefficients of `-log(1-t)/t - 1` in exponential form.
    pub fn log_gamma(len: usize) -> Self {
        let terms = (1..=len)
            .map(|m| Rational::new(factorial(m), BigInt::from(m + 1)))
            .collect();
        Self::new("m!/(m+1)", terms)
    }

    /// `x_m = m!/(m+1)` for even `m`, zero for odd `m`: the exponential
    /// coefficients of `t²/3 + t⁴/5 + …`.
    pub fn log_ratio(len: usize) -> Self {
        let terms = (1..=len)
            .map(|m| {
                if m % 2 == 0 {
                    Rational::new(factorial(m), BigInt::from(m + 1))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self::new("0, 2!/3, 0, 4!/5, ...", terms)
    }

    /// `g_n = n! · [tⁿ] series` for `n ≥ 1`.
    pub fn from_series(name: impl Into<String>, series: &TruncatedSeries<Rational>) -> Self {
        let terms = (1..=series.order())
            .map(|n| series.coeff(n) * Rational::from_integer(factorial(n)))
            .collect();
        Self::new(name, terms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn ensure(&self, needed: usize) -> Result<()> {
        if self.terms.len() < needed {
            return Err(Error::SequenceTooShort {
                name: self.name.clone(),
                len: self.terms.len(),
                needed,
            });
        }
        Ok(())
    }
}

/// `B_{n,k}(x₁, …, x_{n-k+1})` by the recurrence
/// `B_{n,k} = Σ_{m=1}^{n-k+1} C(n-1, m-1) x_m B_{n-m,k-1}`, `B_{0,0} = 1`.
pub fn partial_bell(n: usize, k: usize, xs: &SequenceSpec) -> Result<Rational> {
    if k > n || (k == 0) != (n == 0) {
        return Ok(Rational::zero());
    }
    let span = n - k;
    xs.ensure(span + 1)?;
    // layer[d] holds B_{j+d, j} for the current j.
    let mut layer: Vec<Rational> = (0..=span)
        .map(|d| {
            if d == 0 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    for j in 1..=k {
        let next = (0..=span)
            .map(|d| {
                let i = j + d;
                (1..=d + 1)
                    .map(|m| {
                        Rational::from_integer(binomial(i - 1, m - 1))
                            * &xs.terms[m - 1]
                            * &layer[d + 1 - m]
                    })
                    .fold(Rational::zero(), |acc, t| acc + t)
            })
            .collect();
        layer = next;
    }
    Ok(layer[span].clone())
}

/// `P_n^r = Σ_{k=1}^{n} (r)_k B_{n,k}(g₁, g₂, …)` in complex arithmetic.
pub fn potential_poly(n: usize, r: Complex64, gs: &SequenceSpec) -> Result<Complex64> {
    gs.ensure(n)?;
    (1..=n).try_fold(Complex64::zero(), |acc, k| {
        let b = partial_bell(n, k, gs)?.to_f64().unwrap_or(f64::NAN);
        Ok(acc + falling_factorial(r, k) * b)
    })
}

/// Exact `P_n^r` for rational `r`.
pub fn potential_poly_exact(n: usize, r: &Rational, gs: &SequenceSpec) -> Result<Rational> {
    gs.ensure(n)?;
    (1..=n).try_fold(Rational::zero(), |acc, k| {
        Ok(acc + falling_factorial_exact(r, k) * partial_bell(n, k, gs)?)
    })
}

/// Field operations needed by truncated-series arithmetic.
pub trait SeriesScalar: Clone + Num {
    fn from_usize(n: usize) -> Self;
}

impl SeriesScalar for Rational {
    fn from_usize(n: usize) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl SeriesScalar for Complex64 {
    fn from_usize(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// Power series truncated after `t^order`, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: SeriesScalar> TruncatedSeries<T> {
    /// Takes coefficients `c₀, c₁, …`; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series needs a constant term"
        );
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = T::one();
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new((0..=order).map(|k| self.coeff(k)).collect())
    }

    pub fn map<U: SeriesScalar>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries<U> {
        TruncatedSeries::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `log(self)` for a series with unit constant term.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant);
        }
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        for i in 1..=n {
            let mut acc = self.coeffs[i].clone() * T::from_usize(i);
            for (k, o) in out.iter().enumerate().take(i).skip(1) {
                acc = acc - T::from_usize(k) * o.clone() * self.coeffs[i - k].clone();
            }
            out[i] = acc / T::from_usize(i);
        }
        Ok(Self::new(out))
    }

    /// `exp(self)` for a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain(
                "exp of a truncated series needs a zero constant term".into(),
            ));
        }
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        out[0] = T::one();
        for i in 1..=n {
            let mut acc = T::zero();
            for k in 1..=i {
                acc = acc + T::from_usize(k) * self.coeffs[k].clone() * out[i - k].clone();
            }
            out[i] = acc / T::from_usize(i);
        }
        Ok(Self::new(out))
    }

    /// `self^r` as `exp(r · log(self))`.
    pub fn pow(&self, r: &T) -> Result<Self> {
        self.log()?.scale(r).exp()
    }
}

impl<T: SeriesScalar> Mul for &TruncatedSeries<T> {
    type Output = TruncatedSeries<T>;

    /// Cauchy product truncated to the smaller order.
    fn mul(self, rhs: &TruncatedSeries<T>) -> TruncatedSeries<T> {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|i| {
                (0..=i).fold(T::zero(), |acc, k| {
                    acc + self.coeffs[k].clone() * rhs.coeffs[i - k].clone()
                })
            })
            .collect();
        TruncatedSeries::new(coeffs)
    }
}

/// `base^r` through order `order`, complex floating arithmetic.
pub fn series_pow(
    base: &TruncatedSeries<Complex64>,
    r: Complex64,
    order: usize,
) -> Result<TruncatedSeries<Complex64>> {
    if (base.coeff(0) - Complex64::one()).norm() != 0.0 {
        return Err(Error::NonUnitConstant);
    }
    base.truncate(order).pow(&r)
}

/// `base^r` through order `order` for rational `r`, exact.
pub fn series_pow_exact(
    base: &TruncatedSeries<Rational>,
    r: &Rational,
    order: usize,
) -> Result<TruncatedSeries<Rational>> {
    base.truncate(order).pow(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Sum over set partitions of `{0..n}` into `k` blocks of `Π x_{|block|}`.
    fn bell_by_partitions(n: usize, k: usize, xs: &SequenceSpec) -> Rational {
        fn walk(
            i: usize,
            n: usize,
            blocks: &mut Vec<usize>,
            k: usize,
            xs: &SequenceSpec,
            acc: &mut Rational,
        ) {
            if i == n {
                if blocks.len() == k {
                    *acc += blocks
                        .iter()
                        .fold(Rational::one(), |p, &size| p * &xs.terms[size - 1]);
                }
                return;
            }
            for b in 0..blocks.len() {
                blocks[b] += 1;
                walk(i + 1, n, blocks, k, xs, acc);
                blocks[b] -= 1;
            }
            if blocks.len() < k {
                blocks.push(1);
                walk(i + 1, n, blocks, k, xs, acc);
                blocks.pop();
            }
        }
        let mut acc = Rational::zero();
        walk(0, n, &mut Vec::new(), k, xs, &mut acc);
        acc
    }

    fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> SequenceSpec {
        let terms = (0..len)
            .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
            .collect();
        SequenceSpec::new("random", terms)
    }

    #[test]
    fn recurrence_matches_partition_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let xs = random_sequence(&mut rng, 8);
            for n in 1..=8 {
                for k in 1..=n {
                    assert_eq!(
                        partial_bell(n, k, &xs).unwrap(),
                        bell_by_partitions(n, k, &xs),
                        "B_{{{n},{k}}}"
                    );
                }
            }
        }
    }

    #[test]
    fn edge_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs = random_sequence(&mut rng, 12);
        for n in 1..=12 {
            assert_eq!(partial_bell(n, 1, &xs).unwrap(), xs.terms[n - 1]);
            let pow = (0..n).fold(Rational::one(), |p, _| p * &xs.terms[0]);
            assert_eq!(partial_bell(n, n, &xs).unwrap(), pow);
        }
    }

    #[test]
    fn log_gamma_sequence_values() {
        let xs = SequenceSpec::log_gamma(6);
        assert_eq!(partial_bell(2, 1, &xs).unwrap(), q(2, 3));
        assert_eq!(partial_bell(3, 2, &xs).unwrap(), q(1, 1));
    }

    #[test]
    fn short_sequence_is_rejected() {
        let xs = SequenceSpec::log_gamma(2);
        assert!(matches!(
            partial_bell(5, 2, &xs),
            Err(Error::SequenceTooShort { needed: 4, .. })
        ));
        assert!(partial_bell(3, 2, &xs).is_ok());
    }

    #[test]
    fn potential_poly_simple_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gs = random_sequence(&mut rng, 6);
        let r = Complex64::new(0.7, -0.2);
        let g1 = gs.terms[0].to_f64().unwrap();
        assert!((potential_poly(1, r, &gs).unwrap() - r * g1).norm() < 1e-15);
        for n in 1..=6 {
            let gn = gs.terms[n - 1].to_f64().unwrap();
            let one = potential_poly(n, Complex64::one(), &gs).unwrap();
            assert!((one - gn).norm() < 1e-12 * gn.abs().max(1.0));
        }
    }

    #[test]
    fn potential_poly_squares_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut coeffs = vec![Rational::one()];
        coeffs.extend((1..=4).map(|_| q(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        coeffs.extend((5..=8).map(|_| Rational::zero()));
        let base = TruncatedSeries::new(coeffs);
        let square = &base * &base;
        let gs = SequenceSpec::from_series("random", &base);
        for n in 1..=8 {
            let expect = square.coeff(n) * Rational::from_integer(factorial(n));
            let two = Rational::from_integer(BigInt::from(2));
            assert_eq!(potential_poly_exact(n, &two, &gs).unwrap(), expect);
            let got = potential_poly(n, Complex64::new(2.0, 0.0), &gs).unwrap();
            let expect = expect.to_f64().unwrap();
            assert!((got.re - expect).abs() < 1e-10 * expect.abs().max(1.0) && got.im == 0.0);
        }
    }

    #[test]
    fn pow_edge_cases() {
        let base = TruncatedSeries::new(vec![Complex64::one(), Complex64::one()]);
        let zero = series_pow(&base, Complex64::zero(), 4).unwrap();
        assert_eq!(zero.coeffs(), TruncatedSeries::<Complex64>::one(4).coeffs());
        let sq = series_pow(&base.truncate(4), Complex64::new(2.0, 0.0), 4).unwrap();
        let expect = [1.0, 2.0, 1.0, 0.0, 0.0];
        for (c, e) in sq.coeffs().iter().zip(expect) {
            assert!((c - e).norm() < 1e-14);
        }
        let bad = TruncatedSeries::new(vec![Complex64::new(2.0, 0.0), Complex64::one()]);
        assert_eq!(
            series_pow(&bad, Complex64::one(), 3),
            Err(Error::NonUnitConstant)
        );
    }

    #[test]
    fn reciprocal_matches_long_division() {
        // 1 + t/2 + t²/3 + …
        let order = 10;
        let base = TruncatedSeries::new((0..=order).map(|k| q(1, k as i64 + 1)).collect());
        let inv = series_pow_exact(&base, &q(-1, 1), order).unwrap();
        // long division: d_0 = 1, d_n = -Σ_{k=1}^{n} b_k d_{n-k}
        let mut d = vec![Rational::one()];
        for n in 1..=order {
            let s = (1..=n).fold(Rational::zero(), |acc, k| acc + base.coeff(k) * &d[n - k]);
            d.push(-s);
        }
        assert_eq!(inv.coeffs(), &d[..]);
    }

    #[test]
    fn integer_powers_match_repeated_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let mut coeffs = vec![Rational::one()];
            coeffs.extend((1..=8).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=5))));
            let base = TruncatedSeries::new(coeffs);
            let mut prod = base.clone();
            for r in 2..=4 {
                prod = &prod * &base;
                let pow = series_pow_exact(&base, &q(r, 1), 8).unwrap();
                assert_eq!(pow, prod);
            }
        }
    }

    #[test]
    fn root_of_power_round_trips() {
        let base = TruncatedSeries::new(
            [1.0, 0.3, -0.2, 0.1, 0.05, -0.04, 0.02]
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        );
        for r in [2.0, 3.0] {
            let up = series_pow(&base, Complex64::new(r, 0.0), 6).unwrap();
            let back = series_pow(&up, Complex64::new(1.0 / r, 0.0), 6).unwrap();
            for (a, b) in back.coeffs().iter().zip(base.coeffs()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }
}
