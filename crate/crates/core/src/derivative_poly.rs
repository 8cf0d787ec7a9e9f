//! Derivatives of solutions of `x' = a(x-α)(x-β)` as polynomials in `x`,
//! and the logistic case `x(t) = 1/(1+e^t)`, whose derivatives give
//! `Q_{n+1}(x) = x^{(n)}(t)` and `Q_{n+2} = x(x-1) P_n`.

use num_bigint::{BigInt, Sign};
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::{eulerian, factorial, stirling_second, Rational};
use crate::poly::{GaussianRational, IntPolynomial, Poly};

/// The Riccati equation `x'(t) = a (x - α)(x - β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSpec {
    pub a: Rational,
    pub alpha: GaussianRational,
    pub beta: GaussianRational,
}

fn real(q: Rational) -> GaussianRational {
    Complex::new(q, Rational::zero())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl RiccatiSpec {
    pub fn new(a: Rational, alpha: GaussianRational, beta: GaussianRational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain(
                "the Riccati coefficient a must be nonzero".into(),
            ));
        }
        Ok(Self { a, alpha, beta })
    }

    /// Real spec from integer data.
    pub fn integer(a: i64, alpha: i64, beta: i64) -> Result<Self> {
        Self::new(int(a), real(int(alpha)), real(int(beta)))
    }

    /// `x = 1/(1+e^t)` satisfies `x' = -x(1-x) = x² - x`, i.e. `a = 1`,
    /// `α = 0`, `β = 1`. This orientation of the factors makes
    /// [`riccati_derivative`] equal `Q_{n+1}` with no sign change.
    pub fn logistic() -> Self {
        Self::integer(1, 0, 1).expect("a = 1")
    }

    /// `x = tan t`: `x' = x² + 1 = (x - i)(x + i)`.
    pub fn tangent() -> Self {
        let i = Complex::new(Rational::zero(), Rational::one());
        Self::new(Rational::one(), i.clone(), -i).expect("a = 1")
    }

    /// `a(x-α)(x-β)`.
    pub fn right_side(&self) -> Poly<GaussianRational> {
        (&Poly::linear_root(self.alpha.clone()) * &Poly::linear_root(self.beta.clone()))
            .scale(&real(self.a.clone()))
    }
}

/// `x^{(n)} = aⁿ Σ_{k=0}^{n-1} <n k> (x-α)^{k+1} (x-β)^{n-k}`.
pub fn riccati_derivative(n: usize, spec: &RiccatiSpec) -> Result<Poly<GaussianRational>> {
    if n == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    if spec.a.is_zero() {
        return Err(Error::Domain(
            "the Riccati coefficient a must be nonzero".into(),
        ));
    }
    if n == 1 {
        return Ok(spec.right_side());
    }
    let xa = Poly::linear_root(spec.alpha.clone());
    let xb = Poly::linear_root(spec.beta.clone());
    let sum = (0..n).fold(Poly::zero(), |acc, k| {
        let e = real(Rational::from_integer(eulerian(n, k)));
        acc + (&xa.pow(k + 1) * &xb.pow(n - k)).scale(&e)
    });
    let scale = (0..n).fold(Rational::one(), |acc, _| acc * &spec.a);
    Ok(sum.scale(&real(scale)))
}

/// Integer polynomial as a Gaussian-rational one.
pub fn to_gaussian(p: &IntPolynomial) -> Poly<GaussianRational> {
    p.map(|c| real(Rational::from_integer(c.clone())))
}

fn x_minus_one() -> IntPolynomial {
    IntPolynomial::from_i64(&[-1, 1])
}

fn signed(v: BigInt, negative: bool) -> BigInt {
    if negative {
        -v
    } else {
        v
    }
}

/// `Σ_{k=0}^{n-2} <n-1 k> x^{k+1} (x-1)^{n-1-k}`.
pub fn q_eulerian_form(n: usize) -> IntPolynomial {
    if n < 2 {
        return IntPolynomial::zero();
    }
    (0..=n - 2).fold(IntPolynomial::zero(), |acc, k| {
        let term = IntPolynomial::monomial(eulerian(n - 1, k), k + 1);
        acc + &term * &x_minus_one().pow(n - 1 - k)
    })
}

/// `Σ_{k=1}^{n} (-1)^{n-k} (k-1)! S(n,k) x^k`.
pub fn q_stirling_form(n: usize) -> IntPolynomial {
    let coeffs = (0..=n)
        .map(|k| {
            if k == 0 {
                return BigInt::zero();
            }
            signed(factorial(k - 1) * stirling_second(n, k), (n - k) % 2 == 1)
        })
        .collect();
    IntPolynomial::new(coeffs)
}

/// `Q_n`, the `(n-1)`-th `t`-derivative of `1/(1+e^t)` written in `x`.
/// `Q_1 = x`; for `n >= 2` both closed forms are built and must agree.
pub fn q_poly(n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::Domain("Q_n is defined for n >= 1".into()));
    }
    let stirling = q_stirling_form(n);
    if n >= 2 {
        let euler = q_eulerian_form(n);
        if euler != stirling {
            return Err(Error::Defect(format!(
                "Eulerian and Stirling forms of Q_{n} differ: {euler} vs {stirling}"
            )));
        }
    }
    Ok(stirling)
}

/// `Σ_{k=0}^{n} <n+1 k> x^k (x-1)^{n-k}`.
pub fn p_eulerian_form(n: usize) -> IntPolynomial {
    (0..=n).fold(IntPolynomial::zero(), |acc, k| {
        let term = IntPolynomial::monomial(eulerian(n + 1, k), k);
        acc + &term * &x_minus_one().pow(n - k)
    })
}

/// `Σ_{k=1}^{n+1} (-1)^{n+1-k} k! S(n+1,k) x^{k-1}`.
pub fn p_stirling_form(n: usize) -> IntPolynomial {
    let coeffs = (1..=n + 1)
        .map(|k| {
            signed(
                factorial(k) * stirling_second(n + 1, k),
                (n + 1 - k) % 2 == 1,
            )
        })
        .collect();
    IntPolynomial::new(coeffs)
}

/// `P_n = Q_{n+2} / (x(x-1))`, checked against both closed forms.
pub fn p_poly(n: usize) -> Result<IntPolynomial> {
    let euler = p_eulerian_form(n);
    let stirling = p_stirling_form(n);
    if euler != stirling {
        return Err(Error::Defect(format!(
            "Eulerian and Stirling forms of P_{n} differ: {euler} vs {stirling}"
        )));
    }
    let quotient = q_poly(n + 2)?
        .div_exact_monic(&IntPolynomial::from_i64(&[0, -1, 1]))
        .ok_or_else(|| Error::Defect(format!("x(x-1) does not divide Q_{}", n + 2)))?;
    if quotient != euler {
        return Err(Error::Defect(format!("Q_{}/(x(x-1)) is not P_{n}", n + 2)));
    }
    Ok(euler)
}

/// Grid resolution of the first sign-change scan, as a power of two.
pub const SCAN_BITS: u64 = 12;
/// Finest scan tried before giving up.
pub const MAX_SCAN_BITS: u64 = 20;
/// Bisection stops at brackets of width `2^-40` (< 1e-12).
pub const BRACKET_BITS: u64 = 40;

/// A root of a polynomial in `[lo, hi]`; `lo == hi` when the root is a
/// dyadic rational hit exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn dyadic(m: &BigInt, bits: u64) -> f64 {
    crate::number::bigint_to_f64(m) / 2f64.powi(bits as i32)
}

/// Bisect `(m/2^bits, (m+1)/2^bits)`, across which `p` changes sign, down
/// to width `2^-BRACKET_BITS`.
fn refine(p: &IntPolynomial, m: BigInt, bits: u64, left: Sign) -> RootBracket {
    let mut lo = m;
    let mut bits = bits;
    while bits < BRACKET_BITS {
        lo <<= 1;
        bits += 1;
        let mid = &lo + 1;
        match p.sign_at_dyadic(&mid, bits) {
            Sign::NoSign => {
                let x = dyadic(&mid, bits);
                return RootBracket { lo: x, hi: x };
            }
            s if s == left => lo = mid,
            _ => {}
        }
    }
    RootBracket {
        lo: dyadic(&lo, bits),
        hi: dyadic(&(lo + 1), bits),
    }
}

fn scan(p: &IntPolynomial, bits: u64) -> Vec<RootBracket> {
    let cells = 1u64 << bits;
    let mut roots = Vec::new();
    let mut prev = p.sign_at_dyadic(&BigInt::zero(), bits);
    for m in 1..=cells {
        let mb = BigInt::from(m);
        let cur = p.sign_at_dyadic(&mb, bits);
        if cur == Sign::NoSign {
            if m < cells {
                let x = dyadic(&mb, bits);
                roots.push(RootBracket { lo: x, hi: x });
            }
        } else if prev != Sign::NoSign && cur != prev {
            roots.push(refine(p, BigInt::from(m - 1), bits, prev));
        }
        prev = cur;
    }
    roots
}

/// Brackets of the sign changes of `p` in `(0, 1)`.
///
/// The unit interval is scanned on a grid of `2^12` cells; if fewer sign
/// changes than the degree turn up the grid is halved in step until
/// `2^20` cells, after which the shortfall is reported as a defect.
pub fn roots_in_unit_interval(p: &IntPolynomial) -> Result<Vec<RootBracket>> {
    let degree = p.degree().unwrap_or(0);
    let mut bits = SCAN_BITS;
    loop {
        let roots = scan(p, bits);
        if roots.len() >= degree {
            return Ok(roots);
        }
        if bits >= MAX_SCAN_BITS {
            return Err(Error::Defect(format!(
                "found {} of {degree} roots of {p} in (0,1) on a 2^{bits} grid",
                roots.len()
            )));
        }
        bits += 1;
    }
}

/// Roots of `P_n` and `P_{n+1}` and whether they interlace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub roots: Vec<RootBracket>,
    pub next_roots: Vec<RootBracket>,
    pub interlaced: bool,
}

/// Whether each gap between consecutive roots of `P_{n+1}` holds exactly
/// one root of `P_n`.
pub fn interlacing_check(n: usize) -> Result<InterlacingReport> {
    let roots = roots_in_unit_interval(&p_poly(n)?)?;
    let next_roots = roots_in_unit_interval(&p_poly(n + 1)?)?;
    let interlaced = next_roots.len() == roots.len() + 1
        && next_roots.windows(2).all(|gap| {
            roots
                .iter()
                .filter(|r| r.lo > gap[0].hi && r.hi < gap[1].lo)
                .count()
                == 1
        });
    Ok(InterlacingReport {
        n,
        roots,
        next_roots,
        interlaced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(re: i64, im: i64) -> GaussianRational {
        Complex::new(int(re), int(im))
    }

    #[test]
    fn riccati_examples() {
        let tan2 = riccati_derivative(2, &RiccatiSpec::tangent()).unwrap();
        let expect = Poly::new(vec![gauss(0, 0), gauss(2, 0), gauss(0, 0), gauss(2, 0)]);
        assert_eq!(tan2, expect);
        let spec = RiccatiSpec::integer(3, -2, 5).unwrap();
        assert_eq!(riccati_derivative(1, &spec).unwrap(), spec.right_side());
        assert!(riccati_derivative(0, &spec).is_err());
        assert!(RiccatiSpec::integer(0, 1, 2).is_err());
    }

    #[test]
    fn logistic_specialization() {
        let spec = RiccatiSpec::logistic();
        for n in 1..=12 {
            let d = riccati_derivative(n, &spec).unwrap();
            assert_eq!(d, to_gaussian(&q_poly(n + 1).unwrap()), "n = {n}");
        }
    }

    #[test]
    fn chain_property() {
        let specs = [
            RiccatiSpec::logistic(),
            RiccatiSpec::tangent(),
            RiccatiSpec::new(
                Rational::new(BigInt::from(-3), BigInt::from(2)),
                gauss(2, 1),
                Complex::new(Rational::new(1.into(), 3.into()), int(0)),
            )
            .unwrap(),
        ];
        for spec in &specs {
            let rhs = spec.right_side();
            for n in 1..=12 {
                let d = riccati_derivative(n, spec).unwrap();
                let next = riccati_derivative(n + 1, spec).unwrap();
                assert_eq!(next, &d.derivative() * &rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn listed_q() {
        assert_eq!(q_poly(1).unwrap(), IntPolynomial::from_i64(&[0, 1]));
        assert_eq!(q_poly(2).unwrap(), IntPolynomial::from_i64(&[0, -1, 1]));
        assert_eq!(q_poly(3).unwrap(), IntPolynomial::from_i64(&[0, 1, -3, 2]));
        assert_eq!(
            q_poly(4).unwrap(),
            IntPolynomial::from_i64(&[0, -1, 7, -12, 6])
        );
        assert!(q_poly(0).is_err());
    }

    #[test]
    fn forms_agree() {
        for n in 2..=20 {
            assert_eq!(q_eulerian_form(n), q_stirling_form(n), "Q_{n}");
        }
        for n in 0..=18 {
            assert_eq!(p_poly(n).unwrap().degree(), Some(n));
        }
    }

    #[test]
    fn listed_p() {
        assert_eq!(p_poly(0).unwrap(), IntPolynomial::from_i64(&[1]));
        assert_eq!(p_poly(1).unwrap(), IntPolynomial::from_i64(&[-1, 2]));
        assert_eq!(p_poly(2).unwrap(), IntPolynomial::from_i64(&[1, -6, 6]));
    }

    #[test]
    fn derivative_of_logistic_matches_q() {
        // x'' at t = 0.3 by central differences of x' = x(x-1)
        let x = |t: f64| 1.0 / (1.0 + t.exp());
        let xp = |t: f64| x(t) * (x(t) - 1.0);
        let h = 1e-5;
        let fd = (xp(0.3 + h) - xp(0.3 - h)) / (2.0 * h);
        assert!((fd - q_poly(3).unwrap().eval_f64(x(0.3))).abs() < 1e-9);
    }

    #[test]
    fn roots_of_small_p() {
        let r1 = roots_in_unit_interval(&p_poly(1).unwrap()).unwrap();
        assert_eq!(r1, vec![RootBracket { lo: 0.5, hi: 0.5 }]);
        let r2 = roots_in_unit_interval(&p_poly(2).unwrap()).unwrap();
        assert_eq!(r2.len(), 2);
        let exact = 0.5 - (3f64).sqrt() / 6.0;
        assert!((r2[0].midpoint() - exact).abs() < 1e-12);
        assert!((r2[0].midpoint() + r2[1].midpoint() - 1.0).abs() < 1e-12);
        assert!(r2.iter().all(|b| b.width() <= 1e-12));
    }

    #[test]
    fn roots_of_p8() {
        let roots = roots_in_unit_interval(&p_poly(8).unwrap()).unwrap();
        assert_eq!(roots.len(), 8);
        assert!(roots
            .iter()
            .all(|b| b.lo > 0.0 && b.hi < 1.0 && b.width() <= 1e-12));
        assert!(roots.windows(2).all(|w| w[0].hi < w[1].lo));
    }

    #[test]
    fn missing_roots_are_a_defect() {
        // x² + 1 has none in (0,1)
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        assert!(matches!(roots_in_unit_interval(&p), Err(Error::Defect(_))));
    }

    #[test]
    fn interlacing() {
        assert!(interlacing_check(0).unwrap().interlaced);
        let one = interlacing_check(1).unwrap();
        assert!(one.interlaced && one.roots[0].midpoint() == 0.5);
        for n in 2..=10 {
            assert!(interlacing_check(n).unwrap().interlaced, "n = {n}");
        }
    }
}
