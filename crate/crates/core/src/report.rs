use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which expansion a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Gamma,
    Zeta,
}

/// How the inner sums are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    /// Coefficient rows from the triangle, combined with `(s)_k` by nesting.
    #[default]
    Direct,
    /// Terms propagated row to row by their own two-term recurrence.
    Recurrence,
}

impl std::str::FromStr for Path {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Path::Direct),
            "recurrence" => Ok(Path::Recurrence),
            other => Err(format!(
                "unknown path `{other}` (expected direct or recurrence)"
            )),
        }
    }
}

/// Partial sums of one series evaluation and how they compare to the
/// reference value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    pub target: Target,
    pub s: Complex64,
    pub terms: usize,
    pub path: Path,
    /// `partial_sums[j]` is the value after `j` terms of the outer sum.
    pub partial_sums: Vec<Complex64>,
    /// `term_magnitudes[j-1]` is `|partial_sums[j] - partial_sums[j-1]|`.
    pub term_magnitudes: Vec<f64>,
    pub reference: Complex64,
    pub abs_error: f64,
    pub rel_error: f64,
    /// Fractional bits used when combining coefficients with `s`.
    pub working_bits: u64,
    /// log₂ of the bound on the largest inner term.
    pub log2_peak_term: f64,
}

impl SeriesReport {
    pub fn value(&self) -> Complex64 {
        *self.partial_sums.last().expect("at least the leading term")
    }

    /// Relative error of the partial sum after `j` terms.
    pub fn rel_error_at(&self, j: usize) -> f64 {
        relative(self.partial_sums[j], self.reference)
    }

    pub(crate) fn finish(mut self) -> Self {
        let v = self.value();
        self.abs_error = (v - self.reference).norm();
        self.rel_error = relative(v, self.reference);
        self
    }
}

/// `|a - b| / |b|`, or the absolute gap when `b` is zero.
pub fn relative(a: Complex64, b: Complex64) -> f64 {
    let gap = (a - b).norm();
    if b.norm() == 0.0 {
        gap
    } else {
        gap / b.norm()
    }
}
