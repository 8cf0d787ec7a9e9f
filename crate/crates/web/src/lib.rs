//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain numbers and returns a JSON string; the logic
//! lives in [`api`] so it can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use fallfac::derivative_poly::{interlacing_check, p_poly};
    use fallfac::gamma_series::{gamma_expansion_eval, GammaEvalConfig};
    use fallfac::report::{Path, SeriesReport};
    use fallfac::zeta_series::{zeta_expansion_eval, ZetaEvalConfig};
    use fallfac::{number, Family};
    use num_complex::Complex64;
    use serde::Serialize;

    /// Caps that keep a single call interactive.
    pub const MAX_TERMS: usize = 2000;
    pub const MAX_DEGREE: usize = 16;
    pub const MAX_ROW: usize = 40;

    #[derive(Serialize)]
    struct Curve {
        target: &'static str,
        re: f64,
        im: f64,
        reference: [f64; 2],
        terms: Vec<usize>,
        rel_error: Vec<f64>,
        working_bits: u64,
    }

    /// Relative error of the partial sums every `stride` terms.
    pub fn convergence(
        target: &str,
        re: f64,
        im: f64,
        max_terms: usize,
        stride: usize,
    ) -> Result<String, String> {
        if max_terms > MAX_TERMS {
            return Err(format!("at most {MAX_TERMS} terms"));
        }
        let stride = stride.max(1);
        let s = Complex64::new(re, im);
        let (name, report): (&'static str, SeriesReport) = match target {
            "gamma" => (
                "gamma",
                gamma_expansion_eval(&GammaEvalConfig::new(s, max_terms, Path::Direct))
                    .map_err(|e| e.to_string())?,
            ),
            "zeta" => (
                "zeta",
                zeta_expansion_eval(&ZetaEvalConfig::new(s, max_terms, Path::Direct))
                    .map_err(|e| e.to_string())?,
            ),
            other => return Err(format!("unknown target `{other}`")),
        };
        let terms: Vec<usize> = (0..=max_terms).step_by(stride).collect();
        let rel_error = terms.iter().map(|&j| report.rel_error_at(j)).collect();
        let curve = Curve {
            target: name,
            re,
            im,
            reference: [report.reference.re, report.reference.im],
            terms,
            rel_error,
            working_bits: report.working_bits,
        };
        Ok(serde_json::to_string(&curve).expect("curve serializes"))
    }

    #[derive(Serialize)]
    struct Roots {
        n: usize,
        polynomial: String,
        roots: Vec<f64>,
        next_roots: Vec<f64>,
        interlaced: bool,
        samples: Vec<[f64; 2]>,
    }

    /// Roots of `P_n` and `P_{n+1}`, plus `P_n` sampled on `[0, 1]` scaled
    /// into `[-1, 1]` for plotting.
    pub fn roots(n: usize, samples: usize) -> Result<String, String> {
        if n > MAX_DEGREE {
            return Err(format!("degree at most {MAX_DEGREE}"));
        }
        let p = p_poly(n).map_err(|e| e.to_string())?;
        let report = interlacing_check(n).map_err(|e| e.to_string())?;
        let samples = samples.clamp(2, 4000);
        let raw: Vec<[f64; 2]> = (0..samples)
            .map(|i| {
                let x = i as f64 / (samples - 1) as f64;
                [x, p.eval_f64(x)]
            })
            .collect();
        let peak = raw
            .iter()
            .map(|v| v[1].abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let out = Roots {
            n,
            polynomial: p.to_string(),
            roots: report.roots.iter().map(|r| r.midpoint()).collect(),
            next_roots: report.next_roots.iter().map(|r| r.midpoint()).collect(),
            interlaced: report.interlaced,
            samples: raw.into_iter().map(|[x, y]| [x, y / peak]).collect(),
        };
        Ok(serde_json::to_string(&out).expect("roots serialize"))
    }

    /// Rows `0..=max_row` of a triangle as decimal strings.
    pub fn table(family: &str, max_row: usize) -> Result<String, String> {
        if max_row > MAX_ROW {
            return Err(format!("at most {MAX_ROW} rows"));
        }
        let family: Family = family.parse()?;
        let t = number::table(family, max_row);
        let rows: Vec<Vec<String>> = t
            .rows()
            .take(max_row + 1)
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        Ok(serde_json::to_string(&rows).expect("rows serialize"))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// JSON `{terms, rel_error, reference, …}` for the Γ or ζ expansion.
#[wasm_bindgen]
pub fn convergence(
    target: &str,
    re: f64,
    im: f64,
    max_terms: usize,
    stride: usize,
) -> Result<String, JsError> {
    js(api::convergence(target, re, im, max_terms, stride))
}

/// JSON `{roots, next_roots, interlaced, samples, …}` for `P_n`.
#[wasm_bindgen]
pub fn roots(n: usize, samples: usize) -> Result<String, JsError> {
    js(api::roots(n, samples))
}

/// JSON array of rows of decimal strings.
#[wasm_bindgen]
pub fn table(family: &str, max_row: usize) -> Result<String, JsError> {
    js(api::table(family, max_row))
}
