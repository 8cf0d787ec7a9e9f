use fallfac::gamma_series::{gamma_expansion_eval, GammaEvalConfig};
use fallfac::reference::{integral_identity_check, QuadConfig};
use fallfac::report::SeriesReport;
use fallfac::verify::{checks, CheckOutcome, VerifyConfig, MAX_DEPTH};
use fallfac::zeta_series::{zeta_expansion_eval, ZetaEvalConfig};
use fallfac::{number, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::exit;
use crate::output::{num, Csv, Cx, OutputRecord};
use crate::{ConvergeArgs, EvalArgs, Format, IntegralArgs, TablesArgs, Target, VerifyArgs};

/// Largest row `tables` will print.
pub const TABLE_CAP: usize = 64;
/// Largest `n` accepted by `integral-check`.
pub const INTEGRAL_CAP: usize = 12;

pub struct Emission {
    pub text: String,
    pub code: u8,
}

impl Emission {
    fn ok(text: String) -> Self {
        Self {
            text,
            code: exit::OK,
        }
    }
}

pub struct Failure {
    pub message: String,
    pub code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: exit::USAGE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } => exit::BUDGET,
            Error::NonFinite { .. } => exit::DOMAIN,
            e if e.is_domain() => exit::DOMAIN,
            _ => exit::VERIFY_FAILED,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

type Outcome = Result<Emission, Failure>;

fn target_name(t: Target) -> &'static str {
    match t {
        Target::Gamma => "gamma",
        Target::Zeta => "zeta",
    }
}

#[derive(Serialize)]
struct TablePayload {
    family: &'static str,
    max_row: usize,
    rows: Vec<Vec<String>>,
}

pub fn tables(args: &TablesArgs) -> Outcome {
    if args.max_row > TABLE_CAP {
        return Err(usage(format!(
            "--max {} exceeds the cap of {TABLE_CAP}",
            args.max_row
        )));
    }
    let t = number::table(args.family, args.max_row);
    let rows: Vec<Vec<String>> = (0..=args.max_row)
        .map(|n| {
            t.row(n)
                .unwrap_or_default()
                .iter()
                .map(ToString::to_string)
                .collect()
        })
        .collect();
    let text = match args.format {
        Format::Json => OutputRecord::new(
            "tables",
            TablePayload {
                family: args.family.name(),
                max_row: args.max_row,
                rows,
            },
        )
        .param("family", args.family.name())
        .param("max", args.max_row)
        .to_json(),
        Format::Csv => {
            let width = rows.iter().map(Vec::len).max().unwrap_or(0);
            let mut header = vec!["n".to_string()];
            header.extend((0..width).map(|k| k.to_string()));
            let mut csv = Csv::new(&header);
            for (n, row) in rows.into_iter().enumerate() {
                let mut cells = vec![n.to_string()];
                cells.extend(row);
                cells.resize(width + 1, String::new());
                csv.row(&cells);
            }
            csv.finish()
        }
    };
    Ok(Emission::ok(text))
}

fn evaluate(
    target: Target,
    s: num_complex::Complex64,
    terms: usize,
    path: fallfac::report::Path,
) -> Result<SeriesReport, Failure> {
    Ok(match target {
        Target::Gamma => gamma_expansion_eval(&GammaEvalConfig::new(s, terms, path))?,
        Target::Zeta => zeta_expansion_eval(&ZetaEvalConfig::new(s, terms, path))?,
    })
}

#[derive(Serialize)]
struct EvalPayload {
    target: &'static str,
    s: Cx,
    terms: usize,
    path: fallfac::report::Path,
    value: Cx,
    reference: Cx,
    abs_error: f64,
    rel_error: f64,
    working_bits: u64,
    log2_peak_term: f64,
    term_magnitudes: Vec<f64>,
}

pub fn eval(args: &EvalArgs) -> Outcome {
    let r = evaluate(args.target, args.s, args.terms, args.path)?;
    let text = match args.format {
        Format::Json => OutputRecord::new(
            "eval",
            EvalPayload {
                target: target_name(args.target),
                s: r.s.into(),
                terms: r.terms,
                path: r.path,
                value: r.value().into(),
                reference: r.reference.into(),
                abs_error: r.abs_error,
                rel_error: r.rel_error,
                working_bits: r.working_bits,
                log2_peak_term: r.log2_peak_term,
                term_magnitudes: r.term_magnitudes.clone(),
            },
        )
        .param("target", target_name(args.target))
        .param("s", Cx::from(args.s))
        .param("terms", args.terms)
        .param("path", args.path)
        .to_json(),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "terms",
                "value_re",
                "value_im",
                "reference_re",
                "reference_im",
                "abs_error",
                "rel_error",
            ]);
            let v = r.value();
            csv.row(&[
                r.terms.to_string(),
                num(v.re),
                num(v.im),
                num(r.reference.re),
                num(r.reference.im),
                num(r.abs_error),
                num(r.rel_error),
            ]);
            csv.finish()
        }
    };
    Ok(Emission::ok(text))
}

#[derive(Serialize)]
struct ConvergeRow {
    terms: usize,
    partial_sum: Cx,
    rel_error: f64,
}

pub fn converge(args: &ConvergeArgs) -> Outcome {
    if args.stride == 0 || args.stride > args.max_terms {
        return Err(usage("need --max-terms >= --stride >= 1"));
    }
    let r = evaluate(args.target, args.s, args.max_terms, args.path)?;
    let rows: Vec<ConvergeRow> = (args.stride..=args.max_terms)
        .step_by(args.stride)
        .map(|j| ConvergeRow {
            terms: j,
            partial_sum: r.partial_sums[j].into(),
            rel_error: r.rel_error_at(j),
        })
        .collect();
    let text = match args.format {
        Format::Json => OutputRecord::new("converge", &rows)
            .param("target", target_name(args.target))
            .param("s", Cx::from(args.s))
            .param("max_terms", args.max_terms)
            .param("stride", args.stride)
            .param("path", args.path)
            .to_json(),
        Format::Csv => {
            let mut csv = Csv::new(&["terms", "partial_sum_re", "partial_sum_im", "rel_error"]);
            for row in &rows {
                csv.row(&[
                    row.terms.to_string(),
                    num(row.partial_sum.re),
                    num(row.partial_sum.im),
                    num(row.rel_error),
                ]);
            }
            csv.finish()
        }
    };
    Ok(Emission::ok(text))
}

#[derive(Serialize)]
struct VerifyPayload<'a> {
    suite: String,
    depth: usize,
    seed: u64,
    passed: usize,
    failed: usize,
    checks: &'a [CheckOutcome],
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var("THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(usage(format!(
                "THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    if args.depth > MAX_DEPTH {
        return Err(usage(format!(
            "--depth {} exceeds the cap of {MAX_DEPTH}",
            args.depth
        )));
    }
    let cfg = VerifyConfig {
        depth: args.depth,
        seed: args.seed,
    };
    let list = checks(args.suite, cfg);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| usage(format!("cannot start worker threads: {e}")))?;
    // collect() on an indexed parallel iterator keeps registry order
    let outcomes: Vec<CheckOutcome> = pool.install(|| list.par_iter().map(|c| c.run()).collect());
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let text = match args.format {
        Some(Format::Json) => OutputRecord::new(
            "verify",
            VerifyPayload {
                suite: args.suite.to_string(),
                depth: args.depth,
                seed: args.seed,
                passed: outcomes.len() - failed,
                failed,
                checks: &outcomes,
            },
        )
        .param("suite", args.suite.to_string())
        .param("depth", args.depth)
        .param("seed", args.seed)
        .to_json(),
        Some(Format::Csv) => {
            let mut csv = Csv::new(&["suite", "check", "status", "witness"]);
            for o in &outcomes {
                let witness = o
                    .witness
                    .clone()
                    .unwrap_or_default()
                    .replace([',', '\n'], ";");
                csv.row(&[
                    o.suite.to_string(),
                    o.name.replace(',', ";"),
                    status(o).to_string(),
                    witness,
                ]);
            }
            csv.finish()
        }
        None => {
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{} {}/{}", status(o), o.suite, o.name));
                if let Some(w) = &o.witness {
                    text.push_str(&format!(": {w}"));
                }
                text.push('\n');
            }
            text.push_str(&format!("{} checks, {} failed\n", outcomes.len(), failed));
            text
        }
    };
    Ok(Emission {
        text,
        code: if failed == 0 {
            exit::OK
        } else {
            exit::VERIFY_FAILED
        },
    })
}

fn status(o: &CheckOutcome) -> &'static str {
    if o.passed {
        "PASS"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct IntegralPayload {
    s: Cx,
    n: usize,
    lhs: Cx,
    rhs: Cx,
    abs_diff: f64,
    rel_diff: f64,
    quadrature_value: Cx,
    quadrature_error_estimate: f64,
    quadrature_evaluations: usize,
}

pub fn integral_check(args: &IntegralArgs) -> Outcome {
    if args.n > INTEGRAL_CAP {
        return Err(usage(format!(
            "--n {} exceeds the cap of {INTEGRAL_CAP}",
            args.n
        )));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(usage("--tol must be positive"));
    }
    let cfg = QuadConfig {
        tol: args.tol,
        budget: args.budget,
        ..QuadConfig::default()
    };
    let r = integral_identity_check(args.s, args.n, &cfg)?;
    let text = OutputRecord::new(
        "integral-check",
        IntegralPayload {
            s: r.s.into(),
            n: r.n,
            lhs: r.lhs.into(),
            rhs: r.rhs.into(),
            abs_diff: r.abs_diff,
            rel_diff: r.rel_diff,
            quadrature_value: r.quadrature.value.into(),
            quadrature_error_estimate: r.quadrature.error_estimate,
            quadrature_evaluations: r.quadrature.evaluations,
        },
    )
    .param("s", Cx::from(args.s))
    .param("n", args.n)
    .param("tol", args.tol)
    .param("budget", args.budget)
    .to_json();
    Ok(Emission::ok(text))
}
