//! Binary fixed-point complex numbers backed by `BigInt`.
//!
//! The β-sums of both expansions combine exact integer coefficients with
//! falling factorials of `s`, and the individual terms grow far beyond the
//! size of the sum (at 400 terms they reach ~10³⁴ while the sum is ~10⁻³).
//! Evaluating them in doubles returns noise, so the combination is carried
//! out with `bits` fractional bits chosen from a magnitude bound and rounded
//! to `f64` once at the end.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

/// Value `(re + i·im) / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    re: BigInt,
    im: BigInt,
    bits: u64,
}

/// Exact `BigInt` holding `x · 2^bits`, truncated toward negative infinity.
fn scaled_f64(x: f64, bits: u64) -> BigInt {
    assert!(x.is_finite(), "cannot represent {x} in fixed point");
    if x == 0.0 {
        return BigInt::zero();
    }
    let raw = x.to_bits();
    let exp = ((raw >> 52) & 0x7ff) as i64;
    let frac = raw & ((1u64 << 52) - 1);
    let (mantissa, e2) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let mut m = BigInt::from(mantissa);
    if x < 0.0 {
        m = -m;
    }
    let shift = e2 + bits as i64;
    if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    }
}

/// `n / 2^bits` rounded to a double, for `n` of any size.
fn unscale(n: &BigInt, bits: u64) -> f64 {
    let len = n.bits();
    let drop = len.saturating_sub(64);
    let top = (n >> drop).to_f64().unwrap_or(0.0);
    ldexp(top, drop as i64 - bits as i64)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Fixed {
    pub fn zero(bits: u64) -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
            bits,
        }
    }

    pub fn from_complex(z: Complex64, bits: u64) -> Self {
        Self {
            re: scaled_f64(z.re, bits),
            im: scaled_f64(z.im, bits),
            bits,
        }
    }

    pub fn from_int(n: &BigInt, bits: u64) -> Self {
        Self {
            re: n << bits,
            im: BigInt::zero(),
            bits,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(unscale(&self.re, self.bits), unscale(&self.im, self.bits))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Fixed-point product; both operands must share the same scale.
    pub fn mul(&self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Fixed {
            re: re >> self.bits,
            im: im >> self.bits,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Fixed {
        Fixed {
            re: &self.re * k,
            im: &self.im * k,
            bits: self.bits,
        }
    }

    pub fn mul_small(&self, k: u64) -> Fixed {
        Fixed {
            re: &self.re * k,
            im: &self.im * k,
            bits: self.bits,
        }
    }

    /// Division by a positive integer, truncated.
    pub fn div_int(&self, d: &BigInt) -> Fixed {
        Fixed {
            re: floor_div(&self.re, d),
            im: floor_div(&self.im, d),
            bits: self.bits,
        }
    }

    pub fn div_small(&self, d: u64) -> Fixed {
        self.div_int(&BigInt::from(d))
    }

    /// `self - k` for an integer `k`.
    pub fn sub_small(&self, k: u64) -> Fixed {
        Fixed {
            re: &self.re - (BigInt::from(k) << self.bits),
            im: self.im.clone(),
            bits: self.bits,
        }
    }
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    use num_integer::Integer;
    n.div_floor(d)
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        Fixed {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
            bits: self.bits,
        }
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, rhs.bits);
        Fixed {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
            bits: self.bits,
        }
    }
}

/// `Σ_{k=1}^{upper} (s)_k · row[k] / (offset + k)!` in fixed point.
///
/// Nested from the top index down:
/// `h ← row[k] + h·(s-k)/(offset+k+1)`, then `sum = h·s/(offset+1)/offset!`,
/// so the smallest contributions are folded in first and no falling factorial
/// is ever formed on its own.
pub fn falling_weighted_sum(row: &[BigInt], upper: usize, offset: usize, s: &Fixed) -> Fixed {
    let bits = s.bits();
    if upper == 0 {
        return Fixed::zero(bits);
    }
    let entry = |k: usize| row.get(k).cloned().unwrap_or_default();
    let mut h = Fixed::from_int(&entry(upper), bits);
    for k in (1..upper).rev() {
        let step = h
            .mul(&s.sub_small(k as u64))
            .div_small((offset + k + 1) as u64);
        h = &Fixed::from_int(&entry(k), bits) + &step;
    }
    let h = h.mul(s).div_small((offset + 1) as u64);
    h.div_int(&crate::number::factorial(offset))
}

/// Natural log of an upper bound on `|term|` over a triangle of terms obeying
/// `t[n][k] = p(n,k)·t[n-step][k] + (s-k+1)·q(n,k)·t[n-step][k-1]`, computed
/// by the same recurrence on absolute values in log space.
pub fn log_magnitude_bound(
    s: Complex64,
    rows: usize,
    step: usize,
    width: impl Fn(usize) -> usize,
    coeffs: impl Fn(usize, usize) -> (f64, f64),
) -> f64 {
    fn log_add(a: f64, b: f64) -> f64 {
        if a == f64::NEG_INFINITY {
            return b;
        }
        if b == f64::NEG_INFINITY {
            return a;
        }
        let (hi, lo) = if a > b { (a, b) } else { (b, a) };
        hi + (lo - hi).exp().ln_1p()
    }
    let mut prev = vec![0.0f64];
    let mut best = 0.0f64;
    let mut n = 0;
    for _ in 0..rows {
        n += step;
        let w = width(n);
        let row: Vec<f64> = (0..w)
            .map(|k| {
                let keep = prev.get(k).copied().unwrap_or(f64::NEG_INFINITY);
                let shift = if k == 0 {
                    f64::NEG_INFINITY
                } else {
                    prev.get(k - 1).copied().unwrap_or(f64::NEG_INFINITY)
                };
                let (p, q) = coeffs(n, k);
                let a = if p > 0.0 {
                    keep + p.ln()
                } else {
                    f64::NEG_INFINITY
                };
                let factor = (s - (k as f64 - 1.0)).norm() * q;
                let b = if factor > 0.0 {
                    shift + factor.ln()
                } else {
                    f64::NEG_INFINITY
                };
                log_add(a, b)
            })
            .collect();
        for v in &row[1.min(row.len())..] {
            best = best.max(*v);
        }
        prev = row;
    }
    best
}

/// Fractional bits needed so that rounding noise stays ~2⁻¹²⁰ below the
/// largest intermediate term, rounded up to whole limbs.
pub fn working_bits(log_bound: f64, rows: usize) -> u64 {
    let growth = (log_bound / std::f64::consts::LN_2).max(0.0).ceil() as u64;
    let slack = (rows.max(2) as f64).log2().ceil() as u64;
    (160 + growth + slack).div_ceil(64) * 64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::factorial;
    use proptest::prelude::*;

    #[test]
    fn round_trip_doubles() {
        for x in [0.0, 1.0, -2.5, 1e-30, 3.0e5, -7.25e-3, f64::MIN_POSITIVE] {
            let z = Complex64::new(x, -x / 3.0);
            assert_eq!(Fixed::from_complex(z, 1200).to_complex(), z);
        }
    }

    #[test]
    fn weighted_sum_matches_direct_expansion() {
        // Σ_k (s)_k row[k]/(3+k)! for an exact integer s.
        let row: Vec<BigInt> = [0, 5, -7, 11].iter().map(|&v| BigInt::from(v)).collect();
        let s = Complex64::new(6.0, 0.0);
        let got = falling_weighted_sum(&row, 3, 3, &Fixed::from_complex(s, 192)).to_complex();
        let mut expect = 0.0;
        let mut ff = 1.0;
        for k in 1..=3 {
            ff *= 6.0 - (k - 1) as f64;
            expect +=
                ff * [0.0, 5.0, -7.0, 11.0][k] / crate::number::bigint_to_f64(&factorial(3 + k));
        }
        assert!((got.re - expect).abs() < 1e-15 && got.im == 0.0);
    }

    proptest! {
        #[test]
        fn product_matches_doubles(a in -1e3f64..1e3, b in -1e3f64..1e3, c in -1e3f64..1e3, d in -1e3f64..1e3) {
            let x = Complex64::new(a, b);
            let y = Complex64::new(c, d);
            let p = Fixed::from_complex(x, 256).mul(&Fixed::from_complex(y, 256)).to_complex();
            prop_assert!((p - x * y).norm() <= 1e-15 * (x.norm() * y.norm()).max(1e-300) + 1e-60);
        }
    }
}
