//! Exact integers, the classical combinatorial triangles, and the row
//! machinery every coefficient family in the crate is built on.
//!
//! A triangle is produced row by row from a recurrence. [`RowStream`] yields
//! rows lazily while keeping only the two most recent ones, which is what the
//! long series evaluations use; [`Triangle`] collects a prefix of the stream
//! into an immutable table; [`table`] hands out shared snapshots from a
//! process-wide cache that grows on demand.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{gamma_series, mittag_leffler, zeta_series};

/// Exact rational number, always normalized with a positive denominator.
pub type Rational = BigRational;

static ZERO: BigInt = BigInt::ZERO;

/// The coefficient families stored as triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Unsigned Stirling numbers of the first kind (cycle counts).
    Stirling1,
    /// Stirling numbers of the second kind (set partitions).
    Stirling2,
    /// Eulerian numbers (permutations by ascents).
    Eulerian,
    /// `c(α, β)`, the Bell values behind the Gamma expansion.
    C,
    /// `a(n, k)`, coefficients of the Mittag-Leffler polynomials.
    A,
    /// `b(α, β)`, the Bell values behind the zeta expansion.
    B,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Stirling1,
        Family::Stirling2,
        Family::Eulerian,
        Family::C,
        Family::A,
        Family::B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Stirling1 => "stirling1",
            Family::Stirling2 => "stirling2",
            Family::Eulerian => "eulerian",
            Family::C => "c",
            Family::A => "a",
            Family::B => "b",
        }
    }

    /// Number of stored columns in row `n`.
    ///
    /// Most families store `k = 0..=n`. The `b` rows vanish beyond `k = n/2`,
    /// so they keep `⌊n/2⌋ + 2` columns (one trailing zero).
    pub fn width(self, n: usize) -> usize {
        match self {
            Family::B => n / 2 + 2,
            _ => n + 1,
        }
    }

    fn next_row(self, n: usize, prev: &[BigInt], prev2: &[BigInt]) -> Vec<BigInt> {
        match self {
            Family::Stirling1 => stirling1_row(n, prev),
            Family::Stirling2 => stirling2_row(n, prev),
            Family::Eulerian => eulerian_row(n, prev),
            Family::C => gamma_series::c_row(n, prev),
            Family::A => mittag_leffler::a_row(n, prev, prev2),
            Family::B => zeta_series::b_row(n, prev2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Entry `k` of a row, zero when `k` is negative or past the stored width.
#[inline]
pub fn at(row: &[BigInt], k: isize) -> &BigInt {
    if k < 0 {
        &ZERO
    } else {
        row.get(k as usize).unwrap_or(&ZERO)
    }
}

fn stirling1_row(n: usize, prev: &[BigInt]) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let m = BigInt::from(n - 1);
    (0..=n as isize)
        .map(|k| &m * at(prev, k) + at(prev, k - 1))
        .collect()
}

fn stirling2_row(n: usize, prev: &[BigInt]) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    (0..=n as isize)
        .map(|k| BigInt::from(k) * at(prev, k) + at(prev, k - 1))
        .collect()
}

fn eulerian_row(n: usize, prev: &[BigInt]) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    (0..=n as isize)
        .map(|k| BigInt::from(k + 1) * at(prev, k) + BigInt::from(n as isize - k) * at(prev, k - 1))
        .collect()
}

/// Lazily generated rows of one family, starting at row 0.
#[derive(Debug, Clone)]
pub struct RowStream {
    family: Family,
    next: usize,
    prev: Vec<BigInt>,
    prev2: Vec<BigInt>,
}

impl RowStream {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            next: 0,
            prev: Vec::new(),
            prev2: Vec::new(),
        }
    }

    fn resume(family: Family, next: usize, prev: Vec<BigInt>, prev2: Vec<BigInt>) -> Self {
        Self {
            family,
            next,
            prev,
            prev2,
        }
    }
}

impl Iterator for RowStream {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        let mut row = self.family.next_row(self.next, &self.prev, &self.prev2);
        row.resize(self.family.width(self.next), BigInt::zero());
        self.next += 1;
        self.prev2 = std::mem::replace(&mut self.prev, row.clone());
        Some(row)
    }
}

/// Immutable table of one coefficient family, rows `0..=max_row`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    family: Family,
    rows: Vec<Vec<BigInt>>,
}

impl Triangle {
    pub fn build(family: Family, max_row: usize) -> Self {
        Self {
            family,
            rows: RowStream::new(family).take(max_row + 1).collect(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(Vec::as_slice)
    }

    /// Entry `(n, k)`; anything outside the stored range reads as zero.
    pub fn get(&self, n: usize, k: usize) -> &BigInt {
        self.rows.get(n).and_then(|r| r.get(k)).unwrap_or(&ZERO)
    }

    /// A copy truncated to rows `0..=max_row`.
    pub fn truncated(&self, max_row: usize) -> Triangle {
        Triangle {
            family: self.family,
            rows: self.rows[..=max_row.min(self.max_row())].to_vec(),
        }
    }

    fn extended(&self, max_row: usize) -> Triangle {
        let n = self.rows.len();
        let prev = self.rows[n - 1].clone();
        let prev2 = if n >= 2 {
            self.rows[n - 2].clone()
        } else {
            Vec::new()
        };
        let mut rows = self.rows.clone();
        rows.extend(RowStream::resume(self.family, n, prev, prev2).take(max_row + 1 - n));
        Triangle {
            family: self.family,
            rows,
        }
    }
}

static CACHE: LazyLock<RwLock<HashMap<Family, Arc<Triangle>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Shared snapshot of `family` holding at least rows `0..=max_row`.
///
/// Snapshots never change; growing the cache swaps in a longer table under
/// the write lock, so readers holding an older `Arc` are unaffected.
pub fn table(family: Family, max_row: usize) -> Arc<Triangle> {
    if let Some(t) = CACHE.read().unwrap().get(&family) {
        if t.max_row() >= max_row {
            return Arc::clone(t);
        }
    }
    let mut cache = CACHE.write().unwrap();
    let grown = match cache.get(&family) {
        Some(t) if t.max_row() >= max_row => return Arc::clone(t),
        Some(t) => Arc::new(t.extended(max_row)),
        None => Arc::new(Triangle::build(family, max_row)),
    };
    cache.insert(family, Arc::clone(&grown));
    grown
}

/// Unsigned Stirling number of the first kind `[n k]`.
pub fn stirling_first(n: usize, k: usize) -> BigInt {
    table(Family::Stirling1, n).get(n, k).clone()
}

/// Stirling number of the second kind `{n k}`.
pub fn stirling_second(n: usize, k: usize) -> BigInt {
    table(Family::Stirling2, n).get(n, k).clone()
}

/// Eulerian number `<n k>`: permutations of `n` elements with `k` ascents.
pub fn eulerian(n: usize, k: usize) -> BigInt {
    table(Family::Eulerian, n).get(n, k).clone()
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n (n-1) ... (n-k+1) / k!`, zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `1 · 3 · 5 ··· (2m - 1)`.
pub fn double_factorial_odd(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

/// `(s)_k = s (s-1) ··· (s-k+1)`.
pub fn falling_factorial(s: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s - i as f64))
}

/// `s^(k) = s (s+1) ··· (s+k-1)`.
pub fn rising_factorial(s: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (s + i as f64))
}

/// Exact falling factorial of a rational argument.
pub fn falling_factorial_exact(s: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| {
        acc * (s - Rational::from_integer(BigInt::from(i)))
    })
}

/// Nearest double to an exact integer, even when it exceeds `i64`.
pub fn bigint_to_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::NAN)
}
