use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the coefficient, series and quadrature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sequence `{name}` has {len} terms but {needed} are required")]
    SequenceTooShort {
        name: String,
        len: usize,
        needed: usize,
    },

    #[error("series constant term must be 1 to take a general power")]
    NonUnitConstant,

    #[error("s = {s} lies within {distance:e} of a pole of the expansion")]
    PoleProximity { s: Complex64, distance: f64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("identity defect: {0}")]
    Defect(String),

    #[error("quadrature budget of {budget} evaluations exhausted (error estimate {estimate:e})")]
    BudgetExceeded { budget: usize, estimate: f64 },

    #[error("integrand is not finite at interior point x = {x}")]
    NonFinite { x: f64 },
}

impl Error {
    /// Numeric-domain failures: poles and out-of-domain arguments.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::PoleProximity { .. } | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
