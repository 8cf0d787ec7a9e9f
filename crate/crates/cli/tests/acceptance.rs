//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the report reads top to bottom.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fallfac::bell::{partial_bell, SequenceSpec};
use fallfac::derivative_poly::{
    interlacing_check, p_poly, q_eulerian_form, q_stirling_form, riccati_derivative,
    roots_in_unit_interval, RiccatiSpec,
};
use fallfac::gamma_series::{c_direct, c_table, gamma_expansion_eval, GammaEvalConfig};
use fallfac::mittag_leffler::{a_table, a_telescoped};
use fallfac::number::{factorial, RowStream};
use fallfac::reference::{
    eta_gamma, gamma_integral, gamma_ref, integral_identity_check, zeta_ref, QuadConfig,
};
use fallfac::report::{relative, Path};
use fallfac::verify::{oracles::bell_by_partitions, DEFAULT_SEED};
use fallfac::zeta_series::{b_direct, b_table, zeta_expansion_eval, ZetaEvalConfig};
use fallfac::{Family, IntPolynomial, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict, Option<Duration>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn cli_json(args: &[&str]) -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fallfac"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited with {:?}", out.status.code())
    })?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn cli_rows(family: &str, max: usize) -> Result<Vec<Vec<String>>, String> {
    let v = cli_json(&[
        "tables",
        family,
        "--max",
        &max.to_string(),
        "--format",
        "json",
    ])?;
    serde_json::from_value(v["payload"]["rows"].clone()).map_err(|e| e.to_string())
}

fn known(rows: &[&[i64]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

/// Cells missing from a CLI row read as zero.
fn same_row(got: &[String], want: &[String]) -> bool {
    let cell = |k: usize| got.get(k).map(String::as_str).unwrap_or("0");
    (0..want.len().max(got.len()))
        .all(|k| cell(k) == want.get(k).map(String::as_str).unwrap_or("0"))
}

fn table_reproduction() -> Verdict {
    let c = known(&[
        &[1, 0],
        &[0, 1, 0],
        &[0, 2, 3, 0],
        &[0, 6, 20, 15, 0],
        &[0, 24, 130, 210, 105, 0],
        &[0, 120, 924, 2380, 2520, 945, 0],
    ]);
    let a = known(&[
        &[1, 0],
        &[0, 2, 0],
        &[0, 0, 4, 0],
        &[0, 4, 0, 8, 0],
        &[0, 0, 32, 0, 16, 0],
        &[0, 48, 0, 160, 0, 32, 0],
        &[0, 0, 736, 0, 640, 0, 64, 0],
        &[0, 1440, 0, 6272, 0, 2240, 0, 128],
    ]);
    let b = known(&[
        &[1, 0],
        &[0, 0],
        &[0, 2, 0],
        &[0, 0, 0],
        &[0, 24, 40, 0],
        &[0, 0, 0, 0],
        &[0, 720, 2688, 2240, 0],
        &[0, 0, 0, 0, 0],
        &[0, 40320, 245376, 443520, 246400, 0],
    ]);
    let started = Instant::now();
    for (family, want) in [("c", &c), ("a", &a), ("b", &b)] {
        let got = cli_rows(family, want.len() - 1)?;
        ensure(got.len() == want.len(), || {
            format!("tables {family}: {} rows", got.len())
        })?;
        for (n, (g, w)) in got.iter().zip(want.iter()).enumerate() {
            ensure(same_row(g, w), || {
                format!("tables {family} row {n}: got {g:?}, expected {w:?}")
            })?;
        }
    }
    ensure(started.elapsed() < Duration::from_secs(1), || {
        format!("took {:?}", started.elapsed())
    })?;
    Ok("c rows 0-5, a rows 0-7, b rows 0-8 exact via the CLI".into())
}

fn definitions_match_recurrences() -> Verdict {
    let c = c_table(24);
    for alpha in 0..=24 {
        for beta in 0..=alpha {
            ensure(c_direct(alpha, beta) == *c.get(alpha, beta), || {
                format!("c({alpha},{beta})")
            })?;
        }
    }
    let a = a_table(24);
    for n in 0..=24 {
        for k in 0..=n {
            ensure(a_telescoped(n, k) == *a.get(n, k), || format!("a({n},{k})"))?;
        }
    }
    let b = b_table(20);
    for alpha in 0..=20 {
        for beta in 0..=alpha / 2 {
            let direct = b_direct(alpha, beta).map_err(|e| e.to_string())?;
            ensure(direct == *b.get(alpha, beta), || {
                format!("b({alpha},{beta})")
            })?;
        }
    }
    Ok("c to row 24, a to row 24, b to row 20".into())
}

fn scaled(value: &BigInt, alpha: usize, beta: usize) -> Rational {
    Rational::new(factorial(alpha) * value, factorial(alpha + beta))
}

fn bell_cross_checks() -> Verdict {
    let log_gamma = SequenceSpec::log_gamma(12);
    let log_ratio = SequenceSpec::log_ratio(12);
    let (c, b) = (c_table(10), b_table(10));
    let mut brute = 0;
    for alpha in 0..=10 {
        for beta in 0..=alpha {
            let bell = partial_bell(alpha, beta, &log_gamma).map_err(|e| e.to_string())?;
            ensure(bell == scaled(c.get(alpha, beta), alpha, beta), || {
                format!("c side at ({alpha},{beta})")
            })?;
            let bell_b = partial_bell(alpha, beta, &log_ratio).map_err(|e| e.to_string())?;
            let want = b
                .row(alpha)
                .and_then(|r| r.get(beta))
                .cloned()
                .unwrap_or_else(BigInt::zero);
            ensure(bell_b == scaled(&want, alpha, beta), || {
                format!("b side at ({alpha},{beta})")
            })?;
            if alpha <= 8 {
                ensure(bell_by_partitions(alpha, beta, &log_gamma) == bell, || {
                    format!("partitions at ({alpha},{beta})")
                })?;
                ensure(
                    bell_by_partitions(alpha, beta, &log_ratio) == bell_b,
                    || format!("partitions b at ({alpha},{beta})"),
                )?;
                brute += 2;
            }
        }
    }
    Ok(format!(
        "both identities for alpha <= 10; {brute} values also by set-partition enumeration"
    ))
}

fn derivative_polynomials() -> Verdict {
    for n in 2..=20 {
        ensure(q_eulerian_form(n) == q_stirling_form(n), || {
            format!("Q_{n} forms differ")
        })?;
    }
    let x2_minus_x = IntPolynomial::from_i64(&[0, -1, 1]);
    for n in 2..=20 {
        let q = q_eulerian_form(n);
        let quotient = q
            .div_exact_monic(&x2_minus_x)
            .ok_or_else(|| format!("x(x-1) does not divide Q_{n}"))?;
        ensure(
            quotient == p_poly(n - 2).map_err(|e| e.to_string())?,
            || format!("Q_{n}/(x^2-x) != P_{}", n - 2),
        )?;
    }
    for n in 0..=12 {
        let roots = roots_in_unit_interval(&p_poly(n).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(roots.len() == n, || {
            format!("P_{n} has {} roots in (0,1)", roots.len())
        })?;
        if n < 12 {
            ensure(
                interlacing_check(n).map_err(|e| e.to_string())?.interlaced,
                || format!("P_{n}, P_{} not interlaced", n + 1),
            )?;
        }
    }
    let specs = [
        RiccatiSpec::logistic(),
        RiccatiSpec::tangent(),
        RiccatiSpec::integer(3, -2, 5).map_err(|e| e.to_string())?,
    ];
    for spec in &specs {
        let rhs = spec.right_side();
        for n in 1..=12 {
            let d = riccati_derivative(n, spec).map_err(|e| e.to_string())?;
            let next = riccati_derivative(n + 1, spec).map_err(|e| e.to_string())?;
            ensure(next == &d.derivative() * &rhs, || {
                format!("chain rule fails at n = {n} for {spec:?}")
            })?;
        }
    }
    Ok("Q forms 2 <= n <= 20, divisibility, n roots and interlacing n <= 12, chain rule on 3 specs".into())
}

/// `(p/q)_k` as the integer `p(p-q)...(p-(k-1)q)`; the `q^k` is applied by the caller.
fn falling_numerators(p: i64, q: i64, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for j in 0..len as i64 {
        let next = out.last().unwrap() * BigInt::from(p - j * q);
        out.push(next);
    }
    out
}

/// `Σ_k row[k] (p/q)_k / (top_index + k)!` as an exact fraction, rounded once.
fn exact_inner(row: &[BigInt], top: usize, kmax: usize, falls: &[BigInt], q: i64) -> f64 {
    // r = (top + kmax)! / (top + k)!, walked down from k = kmax
    let mut num = BigInt::zero();
    let mut ratio = BigInt::one();
    for k in (1..=kmax).rev() {
        if let Some(c) = row.get(k) {
            if !c.is_zero() {
                num += c * &falls[k] * BigInt::from(q).pow((kmax - k) as u32) * &ratio;
            }
        }
        ratio *= BigInt::from(top + k);
    }
    let den = BigInt::from(q).pow(kmax as u32) * factorial(top + kmax);
    Rational::new(num, den).to_f64().expect("finite")
}

const SAMPLES: [usize; 8] = [50, 100, 150, 200, 250, 300, 350, 400];

fn gamma_oracle(p: i64, q: i64, terms: usize) -> Vec<f64> {
    let s = p as f64 / q as f64;
    let falls = falling_numerators(p, q, terms);
    let mut sums = vec![1.0 / (s + 1.0)];
    for (alpha, row) in RowStream::new(Family::C).enumerate().skip(1).take(terms) {
        let inner = exact_inner(&row, alpha, alpha, &falls, q);
        sums.push(sums[alpha - 1] + inner / (s + alpha as f64 + 1.0));
    }
    sums
}

fn zeta_oracle(p: i64, q: i64, terms: usize) -> Vec<f64> {
    let s = p as f64 / q as f64;
    let falls = falling_numerators(p, q, terms);
    let lead = (s - 1.0).exp2() / s;
    let mut acc = 1.0 / (s + 1.0);
    let mut sums = vec![lead * acc];
    for (n, row) in RowStream::new(Family::B)
        .enumerate()
        .skip(2)
        .step_by(2)
        .take(terms)
    {
        let m = n / 2;
        acc += exact_inner(&row, n, m, &falls, q) / (s + n as f64 + 1.0);
        sums.push(lead * acc);
    }
    sums
}

fn decay(label: &str, errors: &[f64]) -> Result<(), String> {
    ensure(errors.windows(2).all(|w| w[1] < w[0]), || {
        format!("{label}: not monotone {errors:?}")
    })?;
    ensure(errors[errors.len() - 1] * 2.0 <= errors[0], || {
        format!("{label}: less than 2x drop {errors:?}")
    })
}

fn gamma_behaviour() -> Verdict {
    let mut notes = Vec::new();
    for (p, q) in [(1, 2), (1, 1), (3, 2)] {
        let s = p as f64 / q as f64;
        let oracle = gamma_oracle(p, q, 400);
        let report = gamma_expansion_eval(&GammaEvalConfig::new(c64(s), 400, Path::Direct))
            .map_err(|e| e.to_string())?;
        let reference = gamma_ref(c64(s + 1.0)).map_err(|e| e.to_string())?;
        for j in SAMPLES {
            let gap = relative(report.partial_sums[j], c64(oracle[j]));
            ensure(gap < 1e-12, || {
                format!("s={s}: library and oracle differ by {gap:e} at {j} terms")
            })?;
        }
        let errors: Vec<f64> = SAMPLES
            .iter()
            .map(|&j| relative(c64(oracle[j]), reference))
            .collect();
        decay(&format!("gamma s={s}"), &errors)?;
        notes.push(format!(
            "s={s}: {:.2e} -> {:.2e}",
            errors[0],
            errors[errors.len() - 1]
        ));
    }
    Ok(format!(
        "oracle-confirmed monotone decay, {}",
        notes.join(", ")
    ))
}

fn zeta_behaviour() -> Verdict {
    let mut notes = Vec::new();
    for (p, q) in [(3, 4), (1, 1), (2, 1)] {
        let s = p as f64 / q as f64;
        let oracle = zeta_oracle(p, q, 400);
        let direct = zeta_expansion_eval(&ZetaEvalConfig::new(c64(s), 400, Path::Direct))
            .map_err(|e| e.to_string())?;
        let recur = zeta_expansion_eval(&ZetaEvalConfig::new(c64(s), 400, Path::Recurrence))
            .map_err(|e| e.to_string())?;
        let reference = eta_gamma(c64(s)).map_err(|e| e.to_string())?;
        for j in SAMPLES {
            let gap = relative(direct.partial_sums[j], c64(oracle[j]));
            ensure(gap < 1e-12, || {
                format!("s={s}: library and oracle differ by {gap:e} at {j} terms")
            })?;
            let paths = relative(recur.partial_sums[j], direct.partial_sums[j]);
            ensure(paths < 1e-12, || {
                format!("s={s}: paths differ by {paths:e} at {j} terms")
            })?;
        }
        let errors: Vec<f64> = SAMPLES
            .iter()
            .map(|&j| relative(c64(oracle[j]), reference))
            .collect();
        decay(&format!("zeta s={s}"), &errors)?;
        notes.push(format!(
            "s={s}: {:.2e} -> {:.2e}",
            errors[0],
            errors[errors.len() - 1]
        ));
    }
    Ok(format!(
        "paths agree, oracle-confirmed decay, {}",
        notes.join(", ")
    ))
}

fn integral_identity() -> Verdict {
    let mut worst = (0.0f64, Duration::ZERO);
    for s in [0.75, 1.5] {
        for n in 0..=4 {
            let started = Instant::now();
            let r = integral_identity_check(c64(s), n, &QuadConfig::with_tol(1e-11))
                .map_err(|e| e.to_string())?;
            let took = started.elapsed();
            ensure(r.rel_diff < 1e-8, || {
                format!("s={s} n={n}: rel diff {:e}", r.rel_diff)
            })?;
            ensure(took < Duration::from_secs(1), || {
                format!("s={s} n={n}: took {took:?}")
            })?;
            worst = (worst.0.max(r.rel_diff), worst.1.max(took));
        }
    }
    Ok(format!(
        "10 cases, worst rel diff {:.1e}, slowest {:?}",
        worst.0, worst.1
    ))
}

/// ζ(s) for `Re s > 1` by Euler-Maclaurin summation, independent of the η route.
fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    const N: usize = 20;
    // B_2j / (2j)!
    const COEFFS: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let n = N as f64;
    let pow = |x: f64, e: Complex64| (e * x.ln()).exp();
    let mut sum: Complex64 = (1..N).map(|k| pow(k as f64, -s)).sum();
    sum += pow(n, 1.0 - s) / (s - 1.0) + 0.5 * pow(n, -s);
    let mut rising = s;
    for (j, c) in COEFFS.iter().enumerate() {
        sum += *c * rising * pow(n, -s - (2 * j + 1) as f64);
        rising *= (s + (2 * j + 1) as f64) * (s + (2 * j + 2) as f64);
    }
    sum
}

fn oracle_self_tests() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(-3.5..6.0), rng.gen_range(-8.0..8.0));
        let lhs = gamma_ref(s + 1.0).map_err(|e| e.to_string())?;
        let rhs = s * gamma_ref(s).map_err(|e| e.to_string())?;
        let gap = relative(lhs, rhs);
        ensure(gap < 1e-12, || {
            format!("gamma functional equation at {s}: {gap:e}")
        })?;
        worst = worst.max(gap);
    }
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(1.2..5.0), rng.gen_range(-6.0..6.0));
        let gap = relative(
            zeta_ref(s).map_err(|e| e.to_string())?,
            zeta_euler_maclaurin(s),
        );
        ensure(gap < 1e-12, || format!("eta/zeta relation at {s}: {gap:e}"))?;
        worst = worst.max(gap);
    }
    for s in [0.5, 1.5, 2.5] {
        let q = gamma_integral(c64(s), &QuadConfig::with_tol(1e-12)).map_err(|e| e.to_string())?;
        let gap = relative(q.value, gamma_ref(c64(s + 1.0)).map_err(|e| e.to_string())?);
        ensure(gap < 1e-9, || format!("log integral at s={s}: {gap:e}"))?;
    }
    Ok(format!(
        "40 seeded samples, worst {worst:.1e}; log integral at s = 0.5, 1.5, 2.5"
    ))
}

fn verify_all() -> Verdict {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fallfac"))
        .args(["verify", "all", "--depth", "12"])
        .output()
        .map_err(|e| e.to_string())?;
    let took = started.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let summary = text.lines().last().unwrap_or_default().to_string();
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}: {summary}", out.status.code())
    })?;
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("{summary} in {took:.1?}"))
}

fn main() -> ExitCode {
    let ten = Some(Duration::from_secs(10));
    let criteria: [Criterion; 9] = [
        ("table reproduction", table_reproduction, None),
        (
            "closed forms match recurrences",
            definitions_match_recurrences,
            ten,
        ),
        ("Bell oracle cross-checks", bell_cross_checks, ten),
        ("derivative polynomials", derivative_polynomials, ten),
        ("gamma expansion behaviour", gamma_behaviour, None),
        ("zeta expansion behaviour", zeta_behaviour, None),
        ("integral identity", integral_identity, None),
        ("oracle self-tests", oracle_self_tests, None),
        ("verify all --depth 12", verify_all, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let mut verdict = run();
        let took = started.elapsed();
        if let (Ok(_), Some(limit)) = (&verdict, limit) {
            if took > *limit {
                verdict = Err(format!("exceeded the {limit:?} limit"));
            }
        }
        match verdict {
            Ok(detail) => println!("PASS {} {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
