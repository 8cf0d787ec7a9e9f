//! Mittag-Leffler polynomials `M_n(x)`, generated by `((1+t)/(1-t))^x`, and
//! their coefficient triangle `a(n,k) = [x^k] M_n(x)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::number::{at, table, Family, Triangle};
use crate::poly::IntPolynomial;

/// Row `n` of the `a` triangle:
/// `a(n,k) = (n-1)(n-2) a(n-2,k) + 2 a(n-1,k-1)`, `a(0,0) = 1`.
pub(crate) fn a_row(n: usize, prev: &[BigInt], prev2: &[BigInt]) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let keep = BigInt::from((n as i64 - 1) * (n as i64 - 2));
    (0..=n as isize)
        .map(|k| &keep * at(prev2, k) + 2 * at(prev, k - 1))
        .collect()
}

pub fn a_table(max_row: usize) -> Arc<Triangle> {
    table(Family::A, max_row)
}

/// `a(n,k)` from the unrolled recurrence
/// `Σ_{m=0}^{k-1} 2^m (n-1-m)(n-2-m) a(n-2-m, k-m)`, plus the boundary term
/// `2^k a(n-k, 0)` left over after `k` unrolling steps.
///
/// The boundary term vanishes unless `k = n`, where it is the whole value
/// `2^n`; [`a_telescoped_sum`] is the bare sum.
pub fn a_telescoped(n: usize, k: usize) -> BigInt {
    let boundary = if k <= n {
        (BigInt::one() << k) * a_table(n - k).get(n - k, 0)
    } else {
        BigInt::zero()
    };
    a_telescoped_sum(n, k) + boundary
}

/// The sum part of [`a_telescoped`] alone; equals `a(n,k)` for `1 <= k < n`.
pub fn a_telescoped_sum(n: usize, k: usize) -> BigInt {
    let t = a_table(n);
    (0..k)
        .filter_map(|m| {
            let row = n.checked_sub(2 + m)?;
            let factor = BigInt::from((n - 1 - m) * (n - 2 - m));
            Some((BigInt::one() << m) * factor * t.get(row, k - m))
        })
        .sum()
}

/// `M_n(x)` as an integer polynomial, read off row `n` of the triangle.
pub fn ml_poly(n: usize) -> IntPolynomial {
    IntPolynomial::new(a_table(n).row(n).expect("row present").to_vec())
}

pub fn ml_eval(n: usize, x: Complex64) -> Complex64 {
    ml_poly(n).eval_complex(x)
}

/// `M_n` by the polynomial recurrence `M_n = (n-1)(n-2) M_{n-2} + 2x M_{n-1}`.
pub fn ml_poly_recurrence(n: usize) -> IntPolynomial {
    let two_x = IntPolynomial::from_i64(&[0, 2]);
    let mut prev2 = IntPolynomial::zero();
    let mut prev = IntPolynomial::from_i64(&[1]);
    for m in 1..=n {
        let keep = BigInt::from((m as i64 - 1) * (m as i64 - 2));
        let next = &prev2.scale(&keep) + &(&two_x * &prev);
        prev2 = std::mem::replace(&mut prev, next);
    }
    prev
}
