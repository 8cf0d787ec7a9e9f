//! Independent numerical references: Γ by the Lanczos approximation, η and ζ
//! by Borwein's accelerated alternating series, double-exponential
//! quadrature, and the integral identities the series expansions come from.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::derivative_poly::p_poly;
use crate::error::{Error, Result};
use crate::number::rising_factorial;

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128.
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// Γ(s) for complex `s`, reflected through `Γ(s)Γ(1-s) = π/sin(πs)` when `Re s < 1/2`.
pub fn gamma_ref(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::PoleProximity { s, distance: 0.0 });
    }
    // (n-1)! is exact in a double up to n = 23
    if s.im == 0.0 && s.re == s.re.round() && (1.0..=23.0).contains(&s.re) {
        let f = (1..s.re as u64).fold(1.0f64, |acc, k| acc * k as f64);
        return Ok(Complex64::new(f, 0.0));
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        return PI / ((PI * s).sin() * gamma_unchecked(1.0 - s));
    }
    let z = s - 1.0;
    let series = LANCZOS_COEFFS[1..]
        .iter()
        .enumerate()
        .fold(Complex64::new(LANCZOS_COEFFS[0], 0.0), |acc, (i, c)| {
            acc + c / (z + (i + 1) as f64)
        });
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * series
}

/// Default order of the Borwein acceleration.
pub const ETA_ORDER: usize = 64;

/// Dirichlet η(s) for `Re s > 0`.
pub fn eta_ref(s: Complex64) -> Result<Complex64> {
    eta_ref_with_order(s, ETA_ORDER)
}

/// η(s) by Borwein's algorithm of order `n`:
/// `η(s) = -(1/d_n) Σ_{k<n} (-1)^k (d_k - d_n) / (k+1)^s`.
pub fn eta_ref_with_order(s: Complex64, n: usize) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "eta reference needs Re s > 0, got {s}"
        )));
    }
    let nf = n as f64;
    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += term;
        d.push(nf * acc);
        let i = i as f64;
        term *= 4.0 * (nf + i) * (nf - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
    }
    let dn = d[n];
    let sum = (0..n).fold(Complex64::new(0.0, 0.0), |sum, k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let power = (-s * ((k + 1) as f64).ln()).exp();
        sum + power * (sign * (d[k] - dn))
    });
    Ok(-sum / dn)
}

/// Riemann ζ(s) as `η(s) / (1 - 2^{1-s})`.
pub fn zeta_ref(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleProximity { s, distance: 0.0 });
    }
    let factor = 1.0 - ((1.0 - s) * LN_2).exp();
    if factor.norm() < 1e-15 {
        return Err(Error::Domain(format!("1 - 2^(1-s) vanishes at s = {s}")));
    }
    Ok(eta_ref(s)? / factor)
}

/// `ζ(s)(1 - 2^{1-s})Γ(s) = η(s)Γ(s)`, finite at `s = 1`.
pub fn eta_gamma(s: Complex64) -> Result<Complex64> {
    Ok(eta_ref(s)? * gamma_ref(s)?)
}

/// Integration range for [`quad_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[a, b]`, tanh-sinh rule; integrable endpoint singularities allowed.
    Finite { a: f64, b: f64 },
    /// `[a, ∞)`, exp-sinh rule; the integrand must decay.
    HalfLine { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Relative tolerance on the level-to-level change.
    pub tol: f64,
    /// Maximum number of integrand evaluations.
    pub budget: usize,
    pub max_level: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            budget: 2_000_000,
            max_level: 14,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Rule {
    domain: Domain,
}

impl Rule {
    /// Abscissa and weight at `u`, or `None` where the abscissa has collapsed
    /// onto an endpoint or overflowed.
    fn node(&self, u: f64) -> Option<(f64, f64)> {
        let v = FRAC_PI_2 * u.sinh();
        match self.domain {
            Domain::Finite { a, b } => {
                let half = 0.5 * (b - a);
                // distance from the nearer endpoint: half·(1 - tanh|v|)
                let gap = 2.0 * half / (1.0 + (2.0 * v.abs()).exp());
                let x = if v >= 0.0 { b - gap } else { a + gap };
                if gap == 0.0 || x <= a || x >= b {
                    return None;
                }
                let w = half * FRAC_PI_2 * u.cosh() / (v.cosh() * v.cosh());
                Some((x, w))
            }
            Domain::HalfLine { a } => {
                let e = v.exp();
                let x = a + e;
                if !x.is_finite() || x <= a {
                    return None;
                }
                Some((x, FRAC_PI_2 * u.cosh() * e))
            }
        }
    }
}

/// Double-exponential quadrature of a complex integrand, refined by halving
/// the step until successive levels agree to `cfg.tol` (relative).
pub fn quad_adaptive<F>(f: F, domain: Domain, cfg: &QuadConfig) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    if let Domain::Finite { a, b } = domain {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
        }
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::Domain(
            "quadrature tolerance must be positive".into(),
        ));
    }
    let rule = Rule { domain };
    let evaluations = Cell::new(0usize);
    let sample = |u: f64| -> Result<Option<Complex64>> {
        let Some((x, w)) = rule.node(u) else {
            return Ok(None);
        };
        evaluations.set(evaluations.get() + 1);
        let y = f(x);
        if !(y.re.is_finite() && y.im.is_finite()) {
            return Err(Error::NonFinite { x });
        }
        Ok(Some(y * w))
    };

    // Locate the useful u-range by walking outward until terms are negligible.
    const SCAN: f64 = 1.0 / 16.0;
    const U_MAX: f64 = 7.0;
    let centre = sample(0.0)?.unwrap_or_default();
    let mut peak = centre.norm();
    let mut cut = [0.0f64; 2];
    for (slot, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut u = 0.0;
        let mut quiet = 0;
        loop {
            let next = u + dir * SCAN;
            if next.abs() > U_MAX {
                break;
            }
            let term = match sample(next) {
                Ok(Some(t)) => t,
                Ok(None) => break,
                // overflow far out in an already negligible tail
                Err(_) if quiet >= 4 => break,
                Err(e) => return Err(e),
            };
            u = next;
            peak = peak.max(term.norm());
            if term.norm() <= 1e-20 * peak {
                quiet += 1;
                if quiet >= 16 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        cut[slot] = u;
    }
    let (lo, hi) = (cut[0], cut[1]);

    let mut h = 0.5f64;
    let mut sum = Complex64::default();
    let mut k = (lo / h).ceil() as i64;
    while (k as f64) * h <= hi {
        if let Some(t) = sample(k as f64 * h)? {
            sum += t;
        }
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for level in 1..=cfg.max_level {
        h *= 0.5;
        let mut k = (lo / h).ceil() as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while (k as f64) * h <= hi {
            if let Some(t) = sample(k as f64 * h)? {
                sum += t;
            }
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).norm();
        estimate = next;
        if evaluations.get() > cfg.budget {
            return Err(Error::BudgetExceeded {
                budget: cfg.budget,
                estimate: error,
            });
        }
        let scale = estimate.norm();
        if level >= 3 && (error <= cfg.tol * scale || (scale == 0.0 && error == 0.0)) {
            return Ok(QuadratureResult {
                value: estimate,
                error_estimate: error,
                evaluations: evaluations.get(),
            });
        }
    }
    Err(Error::BudgetExceeded {
        budget: cfg.budget.min(evaluations.get()),
        estimate: error,
    })
}

/// `t^p` for real `t > 0` and complex `p`.
fn real_pow(t: f64, p: Complex64) -> Complex64 {
    (p * t.ln()).exp()
}

/// `x(1-x)` for `x = 1/(1+e^t)`, stable for large `t`.
fn logistic_slope(t: f64) -> f64 {
    let e = (-t).exp();
    e / ((1.0 + e) * (1.0 + e))
}

fn logistic(t: f64) -> f64 {
    let e = (-t).exp();
    e / (1.0 + e)
}

/// `∫₀¹ (-log(1-t))^s dt`, which equals Γ(s+1).
pub fn gamma_integral(s: Complex64, cfg: &QuadConfig) -> Result<QuadratureResult> {
    // with u = 1 - t the logarithmic endpoint sits at u = 0
    quad_adaptive(
        |u| {
            let l = -u.ln();
            if l == 0.0 {
                return Complex64::default();
            }
            real_pow(l, s)
        },
        Domain::Finite { a: 0.0, b: 1.0 },
        cfg,
    )
}

/// `∫₀^∞ t^{s-1} / (1+e^t) dt` by quadrature.
pub fn left_integral_quadrature(s: Complex64, cfg: &QuadConfig) -> Result<QuadratureResult> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "integral diverges for Re s <= 0 (s = {s})"
        )));
    }
    quad_adaptive(
        |t| real_pow(t, s - 1.0) * logistic(t),
        Domain::HalfLine { a: 0.0 },
        cfg,
    )
}

/// The same integral after `n + 1` integrations by parts:
/// `(-1)^{n+1} / (s(s+1)···(s+n)) · ∫₀^∞ t^{s+n} x^{(n+1)}(t) dt`,
/// where `x^{(n+1)}(t) = x(x-1) P_n(x)` at `x = 1/(1+e^t)`.
pub fn parts_form_quadrature(s: Complex64, n: usize, cfg: &QuadConfig) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "integral diverges for Re s <= 0 (s = {s})"
        )));
    }
    let p = p_poly(n)?;
    let r = quad_adaptive(
        |t| {
            let x = logistic(t);
            let deriv = -logistic_slope(t) * p.eval_f64(x);
            real_pow(t, s + n as f64) * deriv
        },
        Domain::HalfLine { a: 0.0 },
        cfg,
    )?;
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    Ok(r.value * sign / rising_factorial(s, n + 1))
}

/// Both sides of
/// `2^{1-s-n}(-1)^n ∫₀^{1/2} (log((1-x)/x))^{s+n} P_n(x) dx = s^{(n+1)}/2^{s+n-1} · η(s)Γ(s)`.
#[derive(Debug, Clone, Serialize)]
pub struct IntegralCheck {
    pub s: Complex64,
    pub n: usize,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub quadrature: QuadratureResult,
}

pub fn integral_identity_check(s: Complex64, n: usize, cfg: &QuadConfig) -> Result<IntegralCheck> {
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("identity needs Re s > 0, got {s}")));
    }
    let p = p_poly(n)?;
    // x = 1/(1+e^t) turns the log endpoint at x = 0 into a decaying tail.
    let quadrature = quad_adaptive(
        |t| real_pow(t, s + n as f64) * (p.eval_f64(logistic(t)) * logistic_slope(t)),
        Domain::HalfLine { a: 0.0 },
        cfg,
    )?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lhs = ((1.0 - s - n as f64) * LN_2).exp() * sign * quadrature.value;
    let rhs = rising_factorial(s, n + 1) / ((s + n as f64 - 1.0) * LN_2).exp() * eta_gamma(s)?;
    let abs_diff = (lhs - rhs).norm();
    Ok(IntegralCheck {
        s,
        n,
        lhs,
        rhs,
        abs_diff,
        rel_diff: abs_diff / rhs.norm(),
        quadrature,
    })
}
