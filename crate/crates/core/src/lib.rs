//! Exact coefficient triangles and series expansions for Γ(s+1) and
//! ζ(s)(1-2^{1-s})Γ(s) built from falling factorials of `s`.
//!
//! The crate provides
//!
//! * Stirling, Eulerian and the `c`, `a`, `b` triangles as exact integers
//!   ([`number`], [`gamma_series`], [`mittag_leffler`], [`zeta_series`]);
//! * partial Bell and potential polynomials over exact rationals ([`bell`]);
//! * the derivative polynomials of `1/(1+e^t)` with root isolation
//!   ([`derivative_poly`]);
//! * evaluation of both series at complex `s`, with independent references
//!   (Lanczos Γ, Borwein η, double-exponential quadrature) in [`reference`];
//! * a registry of identity checks in [`verify`].
//!
//! ```
//! use fallfac::gamma_series::{gamma_expansion_eval, GammaEvalConfig};
//! use fallfac::report::Path;
//! use num_complex::Complex64;
//!
//! let cfg = GammaEvalConfig::new(Complex64::new(1.0, 0.0), 98, Path::Direct);
//! let report = gamma_expansion_eval(&cfg).unwrap();
//! assert!((report.value().re - 0.99).abs() < 1e-14);
//! ```

pub mod bell;
pub mod derivative_poly;
pub mod error;
pub mod gamma_series;
pub mod mittag_leffler;
pub mod number;
pub mod poly;
pub mod precise;
pub mod reference;
pub mod report;
pub mod verify;
pub mod zeta_series;

pub use error::{Error, Result};
pub use number::{Family, Rational, Triangle};
pub use poly::IntPolynomial;
