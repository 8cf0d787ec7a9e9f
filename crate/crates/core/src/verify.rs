//! Registry of identity checks, grouped into suites.
//!
//! Every check is an independent closure returning a witness on failure, so
//! callers can run them in any order or in parallel and report them in
//! registry order.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{
    partial_bell, potential_poly_exact, series_pow_exact, SequenceSpec, TruncatedSeries,
};
use crate::derivative_poly::{
    interlacing_check, p_poly, q_eulerian_form, q_poly, q_stirling_form, riccati_derivative,
    roots_in_unit_interval, to_gaussian, RiccatiSpec,
};
use crate::gamma_series::{
    c_direct, c_table, gamma_expansion_eval, log_power_series_exact, GammaEvalConfig,
};
use crate::mittag_leffler::{a_table, a_telescoped, a_telescoped_sum, ml_poly, ml_poly_recurrence};
use crate::number::{
    binomial, double_factorial_odd, eulerian, factorial, stirling_first, stirling_second, Family,
    Rational,
};
use crate::poly::{IntPolynomial, Poly};
use crate::reference::{
    eta_gamma, eta_ref, eta_ref_with_order, gamma_integral, gamma_ref, integral_identity_check,
    left_integral_quadrature, parts_form_quadrature, quad_adaptive, zeta_ref, Domain, QuadConfig,
};
use crate::report::{relative, Path, SeriesReport};
use crate::zeta_series::{
    b_direct, b_table, log_ratio_series_exact, zeta_expansion_eval, ZetaEvalConfig,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;
/// Largest accepted depth.
pub const MAX_DEPTH: usize = 24;
/// Largest `n` used by the integral suite.
pub const MAX_INTEGRAL_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Stirling,
    C,
    B,
    Ml,
    Poly,
    Bell,
    Oracle,
    Integral,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Stirling,
        Suite::C,
        Suite::B,
        Suite::Ml,
        Suite::Poly,
        Suite::Bell,
        Suite::Oracle,
        Suite::Integral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Stirling => "stirling",
            Suite::C => "c",
            Suite::B => "b",
            Suite::Ml => "ml",
            Suite::Poly => "poly",
            Suite::Bell => "bell",
            Suite::Oracle => "oracle",
            Suite::Integral => "integral",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                format!("unknown suite `{s}` (expected all, stirling, c, b, ml, poly, bell, oracle or integral)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub depth: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            depth: 12,
            seed: DEFAULT_SEED,
        }
    }
}

type Outcome = std::result::Result<(), String>;
type Body = Box<dyn Fn() -> Outcome + Send + Sync>;

/// One named check, not yet run.
pub struct Check {
    pub suite: Suite,
    pub name: String,
    body: Body,
}

impl Check {
    fn new(
        suite: Suite,
        name: impl Into<String>,
        body: impl Fn() -> Outcome + Send + Sync + 'static,
    ) -> Self {
        Self {
            suite,
            name: name.into(),
            body: Box::new(body),
        }
    }

    pub fn run(&self) -> CheckOutcome {
        let result = (self.body)();
        CheckOutcome {
            suite: self.suite,
            name: self.name.clone(),
            passed: result.is_ok(),
            witness: result.err(),
        }
    }
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Check({}/{})", self.suite, self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// All checks of `suite` at the given depth, in a fixed order.
pub fn checks(suite: Suite, cfg: VerifyConfig) -> Vec<Check> {
    let d = cfg.depth.min(MAX_DEPTH);
    match suite {
        Suite::All => Suite::EACH.iter().flat_map(|&s| checks(s, cfg)).collect(),
        Suite::Stirling => stirling_checks(d),
        Suite::C => c_checks(d),
        Suite::B => b_checks(d),
        Suite::Ml => ml_checks(d),
        Suite::Poly => poly_checks(d),
        Suite::Bell => bell_checks(d, cfg.seed),
        Suite::Oracle => oracle_checks(cfg.seed),
        Suite::Integral => integral_checks(d),
    }
}

/// Runs checks one after another.
pub fn run_all(checks: &[Check]) -> Vec<CheckOutcome> {
    checks.iter().map(Check::run).collect()
}

fn stirling_checks(d: usize) -> Vec<Check> {
    let s = Suite::Stirling;
    let brute = d.min(8);
    let wide = 2 * d;
    vec![
        Check::new(s, format!("permutation counts n<={brute}"), move || {
            for n in 0..=brute {
                let (cycles, ascents) = oracles::permutation_statistics(n);
                let blocks = oracles::set_partition_blocks(n);
                for k in 0..=n {
                    ensure(stirling_first(n, k) == cycles[k].into(), || {
                        format!("[{n} {k}]")
                    })?;
                    ensure(stirling_second(n, k) == blocks[k].into(), || {
                        format!("{{{n} {k}}}")
                    })?;
                    ensure(eulerian(n, k) == ascents[k].into(), || format!("<{n} {k}>"))?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("row sums n<={wide}"), move || {
            for (n, bell) in oracles::bell_numbers(wide).into_iter().enumerate() {
                let first: BigInt = (0..=n).map(|k| stirling_first(n, k)).sum();
                let second: BigInt = (0..=n).map(|k| stirling_second(n, k)).sum();
                let euler: BigInt = (0..=n).map(|k| eulerian(n, k)).sum();
                ensure(first == factorial(n), || format!("Σ[{n} k] = {first}"))?;
                ensure(second == bell, || format!("Σ{{{n} k}} = {second}"))?;
                ensure(euler == factorial(n), || format!("Σ<{n} k> = {euler}"))?;
            }
            Ok(())
        }),
        Check::new(s, format!("eulerian symmetry n<={wide}"), move || {
            for n in 1..=wide {
                for k in 0..n {
                    ensure(eulerian(n, k) == eulerian(n, n - 1 - k), || {
                        format!("<{n} {k}>")
                    })?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("worpitzky n<={wide}"), move || {
            // x^n = Σ_k <n k> C(x+k, n)
            for n in 1..=wide {
                for x in 0..6usize {
                    let lhs = BigInt::from(x).pow(n as u32);
                    let rhs: BigInt = (0..n).map(|k| eulerian(n, k) * binomial(x + k, n)).sum();
                    ensure(lhs == rhs, || format!("n={n}, x={x}: {rhs}"))?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("inverse relation n<={wide}"), move || {
            // Σ_k (-1)^{n-k} [n k] {k m} = δ_{nm}
            for n in 0..=wide {
                for m in 0..=n {
                    let sum: BigInt = (m..=n)
                        .map(|k| {
                            let t = stirling_first(n, k) * stirling_second(k, m);
                            if (n - k) % 2 == 1 {
                                -t
                            } else {
                                t
                            }
                        })
                        .sum();
                    let expect = if n == m {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                    ensure(sum == expect, || format!("n={n}, m={m}: {sum}"))?;
                }
            }
            Ok(())
        }),
    ]
}

/// Sampled relative errors at 50, 100, … terms must fall strictly and end
/// at least a factor of two below the first sample.
fn decay(report: &SeriesReport, stride: usize) -> Outcome {
    let samples: Vec<(usize, f64)> = (1..)
        .map(|j| j * stride)
        .take_while(|&j| j <= report.terms)
        .map(|j| (j, report.rel_error_at(j)))
        .collect();
    for w in samples.windows(2) {
        ensure(w[1].1 < w[0].1, || {
            format!(
                "s={}: error rose from {:e} at {} to {:e} at {}",
                report.s, w[0].1, w[0].0, w[1].1, w[1].0
            )
        })?;
    }
    let (first, last) = (samples[0].1, samples[samples.len() - 1].1);
    ensure(last * 2.0 <= first, || {
        format!("s={}: error {last:e} is not half of {first:e}", report.s)
    })
}

fn paths_agree(a: &SeriesReport, b: &SeriesReport, tol: f64) -> Outcome {
    for (j, (x, y)) in a.partial_sums.iter().zip(&b.partial_sums).enumerate() {
        ensure(relative(*x, *y) <= tol, || {
            format!("s={}, {j} terms: {x} vs {y}", a.s)
        })?;
    }
    Ok(())
}

fn long_terms(d: usize) -> usize {
    (50 * d).clamp(100, 400)
}

fn c_checks(d: usize) -> Vec<Check> {
    let s = Suite::C;
    let rows = 2 * d;
    let terms = long_terms(d);
    vec![
        Check::new(s, "printed table", || {
            let printed: [&[i64]; 6] = [
                &[1],
                &[0, 1],
                &[0, 2, 3],
                &[0, 6, 20, 15],
                &[0, 24, 130, 210, 105],
                &[0, 120, 924, 2380, 2520, 945],
            ];
            let t = c_table(5);
            for (a, row) in printed.iter().enumerate() {
                let got = t.row(a).unwrap_or_default();
                let want: Vec<BigInt> = row.iter().map(|&v| v.into()).collect();
                ensure(got == want, || format!("row {a}: {got:?}"))?;
            }
            Ok(())
        }),
        Check::new(s, format!("definition = recurrence a<={rows}"), move || {
            let t = c_table(rows);
            for a in 0..=rows {
                for b in 0..=a {
                    let direct = c_direct(a, b);
                    ensure(&direct == t.get(a, b), || {
                        format!("c({a},{b}) = {direct} vs {}", t.get(a, b))
                    })?;
                }
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("diagonal and first column a<={rows}"),
            move || {
                let t = c_table(rows);
                for a in 1..=rows {
                    ensure(t.get(a, a) == &double_factorial_odd(a), || {
                        format!("c({a},{a})")
                    })?;
                    ensure(t.get(a, 1) == &factorial(a), || format!("c({a},1)"))?;
                }
                Ok(())
            },
        ),
        Check::new(
            s,
            format!("gamma expansion decays to {terms} terms"),
            move || {
                for x in [0.5, 1.0, 1.5] {
                    let r = gamma_expansion_eval(&GammaEvalConfig::new(
                        c64(x, 0.0),
                        terms,
                        Path::Direct,
                    ))
                    .map_err(|e| e.to_string())?;
                    decay(&r, 50)?;
                }
                Ok(())
            },
        ),
        Check::new(s, "gamma expansion at s=1 is 1-1/(N+2)", || {
            let r = gamma_expansion_eval(&GammaEvalConfig::new(c64(1.0, 0.0), 60, Path::Direct))
                .map_err(|e| e.to_string())?;
            for (n, v) in r.partial_sums.iter().enumerate() {
                let want = 1.0 - 1.0 / (n + 2) as f64;
                ensure((v.re - want).abs() < 1e-14 && v.im == 0.0, || {
                    format!("N={n}: {v}")
                })?;
            }
            Ok(())
        }),
        Check::new(s, "gamma expansion paths agree", || {
            for z in [c64(0.5, 0.0), c64(1.0, 1.0), c64(2.3, 0.0)] {
                let a = gamma_expansion_eval(&GammaEvalConfig::new(z, 50, Path::Direct))
                    .map_err(|e| e.to_string())?;
                let b = gamma_expansion_eval(&GammaEvalConfig::new(z, 50, Path::Recurrence))
                    .map_err(|e| e.to_string())?;
                paths_agree(&a, &b, 1e-12)?;
            }
            Ok(())
        }),
    ]
}

fn b_checks(d: usize) -> Vec<Check> {
    let s = Suite::B;
    let rows = d + 8;
    let terms = long_terms(d);
    vec![
        Check::new(s, "printed table", || {
            let printed: [(usize, &[i64]); 4] = [
                (2, &[0, 2, 0]),
                (4, &[0, 24, 40, 0]),
                (6, &[0, 720, 2688, 2240, 0]),
                (8, &[0, 40320, 245376, 443520, 246400, 0]),
            ];
            let t = b_table(8);
            for (a, row) in printed {
                let got = t.row(a).unwrap_or_default();
                let want: Vec<BigInt> = row.iter().map(|&v| v.into()).collect();
                ensure(got == want, || format!("row {a}: {got:?}"))?;
            }
            Ok(())
        }),
        Check::new(s, format!("definition = recurrence a<={rows}"), move || {
            let t = b_table(rows);
            for a in 0..=rows {
                for b in 0..Family::B.width(a) {
                    let direct = b_direct(a, b).map_err(|e| e.to_string())?;
                    ensure(&direct == t.get(a, b), || {
                        format!("b({a},{b}) = {direct} vs {}", t.get(a, b))
                    })?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("zero pattern a<={rows}"), move || {
            for a in 0..=rows {
                for b in 0..=a + 1 {
                    let v = b_direct(a, b).map_err(|e| e.to_string())?;
                    let nonzero =
                        a % 2 == 0 && (a == 0 || (b >= 1 && b <= a / 2)) && (a > 0 || b == 0);
                    ensure(v.is_zero() != nonzero, || format!("b({a},{b}) = {v}"))?;
                }
            }
            Ok(())
        }),
        Check::new(s, "first column", || {
            let t = b_table(16);
            for n in 1..=8 {
                ensure(t.get(2 * n, 1) == &factorial(2 * n), || {
                    format!("b({},1)", 2 * n)
                })?;
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("eta expansion decays to {terms} terms, paths agree"),
            move || {
                for x in [0.75, 1.0, 2.0] {
                    let a =
                        zeta_expansion_eval(&ZetaEvalConfig::new(c64(x, 0.0), terms, Path::Direct))
                            .map_err(|e| e.to_string())?;
                    decay(&a, 50)?;
                    let b = zeta_expansion_eval(&ZetaEvalConfig::new(
                        c64(x, 0.0),
                        terms,
                        Path::Recurrence,
                    ))
                    .map_err(|e| e.to_string())?;
                    paths_agree(&a, &b, 1e-12)?;
                }
                Ok(())
            },
        ),
        Check::new(s, "eta expansion paths agree off the axis", || {
            for z in [c64(0.5, 0.0), c64(1.0, 0.0), c64(2.0, 1.0)] {
                let a = zeta_expansion_eval(&ZetaEvalConfig::new(z, 40, Path::Direct))
                    .map_err(|e| e.to_string())?;
                let b = zeta_expansion_eval(&ZetaEvalConfig::new(z, 40, Path::Recurrence))
                    .map_err(|e| e.to_string())?;
                paths_agree(&a, &b, 1e-12)?;
            }
            Ok(())
        }),
        Check::new(s, "log-ratio series = series power", || {
            let base = TruncatedSeries::new(
                (0..=12)
                    .map(|k| {
                        if k % 2 == 0 {
                            q(1, k + 1)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
            );
            for r in [q(2, 1), q(1, 2), q(-3, 4)] {
                let power = series_pow_exact(&base, &r, 12).map_err(|e| e.to_string())?;
                let ours = log_ratio_series_exact(&r, 6);
                for n in 0..=6 {
                    ensure(ours.coeff(n) == power.coeff(2 * n), || {
                        format!("r={r}, n={n}")
                    })?;
                }
            }
            Ok(())
        }),
    ]
}

fn ml_checks(d: usize) -> Vec<Check> {
    let s = Suite::Ml;
    let rows = 2 * d;
    let gf = d.min(12);
    vec![
        Check::new(s, "printed rows", || {
            let t = a_table(7);
            let want: [(usize, &[i64]); 3] = [
                (5, &[0, 48, 0, 160, 0, 32]),
                (6, &[0, 0, 736, 0, 640, 0, 64]),
                (7, &[0, 1440, 0, 6272, 0, 2240, 0, 128]),
            ];
            for (n, row) in want {
                let w: Vec<BigInt> = row.iter().map(|&v| v.into()).collect();
                ensure(t.row(n) == Some(&w[..]), || {
                    format!("row {n}: {:?}", t.row(n))
                })?;
            }
            Ok(())
        }),
        Check::new(s, format!("unrolled recurrence n<={rows}"), move || {
            let t = a_table(rows);
            for n in 2..=rows {
                for k in 1..=n {
                    let v = a_telescoped(n, k);
                    ensure(&v == t.get(n, k), || format!("a({n},{k}) = {v}"))?;
                    if k < n {
                        let bare = a_telescoped_sum(n, k);
                        ensure(&bare == t.get(n, k), || {
                            format!("bare sum a({n},{k}) = {bare}")
                        })?;
                    }
                }
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("parity and powers of two n<={rows}"),
            move || {
                let t = a_table(rows);
                for n in 0..=rows {
                    for k in 0..=n {
                        let v = t.get(n, k);
                        let zero = (n - k) % 2 == 1 || (k == 0 && n > 0);
                        ensure(v.is_zero() == zero, || format!("a({n},{k}) = {v}"))?;
                        ensure((v % (BigInt::one() << k)).is_zero(), || {
                            format!("2^{k} ∤ a({n},{k})")
                        })?;
                    }
                    ensure(t.get(n, n) == &(BigInt::one() << n), || {
                        format!("a({n},{n})")
                    })?;
                }
                Ok(())
            },
        ),
        Check::new(s, format!("polynomial recurrence n<={rows}"), move || {
            for n in 0..=rows {
                ensure(ml_poly(n) == ml_poly_recurrence(n), || format!("M_{n}"))?;
            }
            Ok(())
        }),
        Check::new(s, format!("generating function n<={gf}"), move || {
            for n in 0..=gf {
                let want = ml_poly(n)
                    .to_rational()
                    .scale(&Rational::new(BigInt::one(), factorial(n)));
                let got = oracles::mittag_leffler_gf_coeff(n);
                ensure(got == want, || format!("[t^{n}]: {:?}", got.coeffs()))?;
            }
            Ok(())
        }),
        Check::new(s, format!("integer arguments n<={gf}"), move || {
            // ((1+t)/(1-t))^u = (1+t)^u · Σ C(u+k-1, k) t^k
            for u in 1..=3usize {
                let plus = TruncatedSeries::new(
                    (0..=gf)
                        .map(|k| Rational::from_integer(binomial(u, k)))
                        .collect(),
                );
                let minus = TruncatedSeries::new(
                    (0..=gf)
                        .map(|k| {
                            Rational::from_integer(if k == 0 {
                                BigInt::one()
                            } else {
                                binomial(u + k - 1, k)
                            })
                        })
                        .collect(),
                );
                let series = &plus * &minus;
                for n in 0..=gf {
                    let m = ml_poly(n).eval(&BigInt::from(u));
                    let want = Rational::new(m, factorial(n));
                    ensure(series.coeff(n) == want, || format!("u={u}, n={n}"))?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("normalized recurrence n<={gf}"), move || {
            // n g_n = (n-2) g_{n-2} + 2x g_{n-1},  g_n = M_n/n!
            let g = |n: usize| {
                ml_poly(n)
                    .to_rational()
                    .scale(&Rational::new(BigInt::one(), factorial(n)))
            };
            let two_x = Poly::new(vec![Rational::zero(), q(2, 1)]);
            for n in 1..=gf {
                let lhs = g(n).scale(&q(n as i64, 1));
                let back = if n >= 2 {
                    g(n - 2).scale(&q(n as i64 - 2, 1))
                } else {
                    Poly::zero()
                };
                let rhs = &back + &(&two_x * &g(n - 1));
                ensure(lhs == rhs, || format!("n={n}"))?;
            }
            Ok(())
        }),
    ]
}

fn poly_checks(d: usize) -> Vec<Check> {
    let s = Suite::Poly;
    let wide = d + 8;
    vec![
        Check::new(
            s,
            format!("closed forms of Q_n agree n<={wide}"),
            move || {
                for n in 2..=wide {
                    ensure(q_eulerian_form(n) == q_stirling_form(n), || {
                        format!("Q_{n}")
                    })?;
                }
                Ok(())
            },
        ),
        Check::new(
            s,
            format!("x(x-1) Q_n quotient is P_(n-2) n<={wide}"),
            move || {
                let xx = IntPolynomial::from_i64(&[0, -1, 1]);
                for n in 2..=wide {
                    let qn = q_poly(n).map_err(|e| e.to_string())?;
                    let p = p_poly(n - 2).map_err(|e| e.to_string())?;
                    ensure(qn.div_exact_monic(&xx) == Some(p), || format!("Q_{n}"))?;
                }
                Ok(())
            },
        ),
        Check::new(
            s,
            format!("reflection P_n(1-x) = (-1)^n P_n(x) n<={wide}"),
            move || {
                let one_minus_x = IntPolynomial::from_i64(&[1, -1]);
                for n in 0..=wide {
                    let p = p_poly(n).map_err(|e| e.to_string())?;
                    let reflected = p
                        .coeffs()
                        .iter()
                        .enumerate()
                        .fold(IntPolynomial::zero(), |acc, (k, c)| {
                            acc + one_minus_x.pow(k).scale(c)
                        });
                    let want = if n % 2 == 0 { p.clone() } else { -&p };
                    ensure(reflected == want, || format!("P_{n}"))?;
                }
                Ok(())
            },
        ),
        Check::new(s, format!("P_n has n roots in (0,1) n<={d}"), move || {
            for n in 1..=d {
                let roots = roots_in_unit_interval(&p_poly(n).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                ensure(roots.len() == n, || format!("P_{n}: {} roots", roots.len()))?;
                ensure(
                    roots
                        .iter()
                        .all(|r| r.lo > 0.0 && r.hi < 1.0 && r.width() <= 1e-12),
                    || format!("P_{n}: bracket outside (0,1) or too wide"),
                )?;
                ensure(roots.windows(2).all(|w| w[0].hi < w[1].lo), || {
                    format!("P_{n}: overlapping brackets")
                })?;
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("roots of P_n and P_(n+1) interlace n<{d}"),
            move || {
                for n in 0..d {
                    let r = interlacing_check(n).map_err(|e| e.to_string())?;
                    ensure(r.interlaced, || format!("n={n}"))?;
                }
                Ok(())
            },
        ),
        Check::new(s, format!("Riccati chain rule n<={d}"), move || {
            let specs = [
                RiccatiSpec::logistic(),
                RiccatiSpec::tangent(),
                RiccatiSpec::new(
                    q(-3, 2),
                    Complex::new(q(2, 1), q(1, 1)),
                    Complex::new(q(1, 3), Rational::zero()),
                )
                .map_err(|e| e.to_string())?,
            ];
            for (i, spec) in specs.iter().enumerate() {
                let rhs = spec.right_side();
                let mut cur = riccati_derivative(1, spec).map_err(|e| e.to_string())?;
                for n in 1..=d {
                    let next = riccati_derivative(n + 1, spec).map_err(|e| e.to_string())?;
                    ensure(next == &cur.derivative() * &rhs, || {
                        format!("spec {i}, n={n}")
                    })?;
                    cur = next;
                }
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("logistic Riccati derivatives are Q_(n+1) n<={d}"),
            move || {
                let spec = RiccatiSpec::logistic();
                for n in 1..=d {
                    let lhs = riccati_derivative(n, &spec).map_err(|e| e.to_string())?;
                    let rhs = to_gaussian(&q_poly(n + 1).map_err(|e| e.to_string())?);
                    ensure(lhs == rhs, || format!("n={n}"))?;
                }
                Ok(())
            },
        ),
    ]
}

fn random_rationals(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
        .collect()
}

fn bell_checks(d: usize, seed: u64) -> Vec<Check> {
    let s = Suite::Bell;
    let small = d.min(8);
    vec![
        Check::new(s, format!("c values are Bell values a<={d}"), move || {
            let xs = SequenceSpec::log_gamma(d);
            let t = c_table(d);
            for a in 1..=d {
                for b in 1..=a {
                    let lhs = Rational::new(factorial(a) * t.get(a, b), factorial(a + b));
                    let rhs = partial_bell(a, b, &xs).map_err(|e| e.to_string())?;
                    ensure(lhs == rhs, || format!("({a},{b}): {lhs} vs {rhs}"))?;
                }
            }
            Ok(())
        }),
        Check::new(s, format!("b values are Bell values a<={d}"), move || {
            let xs = SequenceSpec::log_ratio(d);
            let t = b_table(d);
            for a in 1..=d {
                for b in 1..=a {
                    let lhs = Rational::new(factorial(a) * t.get(a, b), factorial(a + b));
                    let rhs = partial_bell(a, b, &xs).map_err(|e| e.to_string())?;
                    ensure(lhs == rhs, || format!("({a},{b}): {lhs} vs {rhs}"))?;
                }
            }
            Ok(())
        }),
        Check::new(
            s,
            format!("recurrence = set partitions n<={small}"),
            move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..4 {
                    let xs = SequenceSpec::new("random", random_rationals(&mut rng, small));
                    for n in 0..=small {
                        for k in 0..=n {
                            let got = partial_bell(n, k, &xs).map_err(|e| e.to_string())?;
                            let want = oracles::bell_by_partitions(n, k, &xs);
                            ensure(got == want, || format!("B({n},{k}) = {got} vs {want}"))?;
                        }
                    }
                }
                Ok(())
            },
        ),
        Check::new(
            s,
            format!("potential polynomials = series powers n<={d}"),
            move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
                for _ in 0..4 {
                    let mut coeffs = vec![Rational::one()];
                    coeffs.extend(random_rationals(&mut rng, d));
                    let base = TruncatedSeries::new(coeffs);
                    let gs = SequenceSpec::from_series("random", &base);
                    let r = q(rng.gen_range(-7..=7), rng.gen_range(1..=5));
                    let power = series_pow_exact(&base, &r, d).map_err(|e| e.to_string())?;
                    for n in 1..=d {
                        let pot = potential_poly_exact(n, &r, &gs).map_err(|e| e.to_string())?;
                        let want = power.coeff(n) * Rational::from_integer(factorial(n));
                        ensure(pot == want, || format!("r={r}, n={n}"))?;
                    }
                    let cube = &(&base * &base) * &base;
                    let power3 = series_pow_exact(&base, &q(3, 1), d).map_err(|e| e.to_string())?;
                    ensure(power3 == cube, || format!("cube of {:?}", base.coeffs()))?;
                }
                Ok(())
            },
        ),
        Check::new(
            s,
            format!("(-log(1-t)/t)^3 coefficients n<={d}"),
            move || {
                let base = TruncatedSeries::new((0..=d).map(|k| q(1, k as i64 + 1)).collect());
                let cube = &(&base * &base) * &base;
                ensure(log_power_series_exact(&q(3, 1), d) == cube, || {
                    "cube".into()
                })
            },
        ),
    ]
}

fn oracle_checks(seed: u64) -> Vec<Check> {
    let s = Suite::Oracle;
    vec![
        Check::new(s, "gamma known values", || {
            let cases = [
                (c64(1.0, 0.0), 1.0),
                (c64(5.0, 0.0), 24.0),
                (c64(0.5, 0.0), PI.sqrt()),
                (c64(2.5, 0.0), 1.329_340_388_179_137),
            ];
            for (z, want) in cases {
                let g = gamma_ref(z).map_err(|e| e.to_string())?;
                ensure(relative(g, c64(want, 0.0)) < 1e-13, || {
                    format!("Γ({z}) = {g}")
                })?;
            }
            ensure(gamma_ref(c64(-2.0, 0.0)).is_err(), || {
                "Γ(-2) accepted".into()
            })
        }),
        Check::new(
            s,
            "gamma functional equation, 20 random points",
            move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..20 {
                    let z = c64(rng.gen_range(0.5..5.0), rng.gen_range(-10.0..10.0));
                    let lhs = gamma_ref(z + 1.0).map_err(|e| e.to_string())?;
                    let rhs = z * gamma_ref(z).map_err(|e| e.to_string())?;
                    ensure(relative(lhs, rhs) < 1e-12, || {
                        format!("s={z}: {lhs} vs {rhs}")
                    })?;
                }
                Ok(())
            },
        ),
        Check::new(s, "gamma reflection, 20 random points", move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
            for _ in 0..20 {
                let z = c64(rng.gen_range(0.05..0.95), rng.gen_range(-3.0..3.0));
                let lhs = gamma_ref(z).map_err(|e| e.to_string())?
                    * gamma_ref(1.0 - z).map_err(|e| e.to_string())?;
                let rhs = PI / (z * PI).sin();
                ensure(relative(lhs, rhs) < 1e-12, || {
                    format!("s={z}: {lhs} vs {rhs}")
                })?;
            }
            Ok(())
        }),
        Check::new(s, "eta and zeta known values", || {
            let z2 = zeta_ref(c64(2.0, 0.0)).map_err(|e| e.to_string())?;
            ensure((z2.re - PI * PI / 6.0).abs() < 1e-14, || {
                format!("ζ(2) = {z2}")
            })?;
            let e1 = eta_ref(c64(1.0, 0.0)).map_err(|e| e.to_string())?;
            ensure((e1.re - LN_2).abs() < 1e-14, || format!("η(1) = {e1}"))?;
            let zh = zeta_ref(c64(0.5, 0.0)).map_err(|e| e.to_string())?;
            ensure((zh.re + 1.460_354_508_809_586_8).abs() < 1e-12, || {
                format!("ζ(1/2) = {zh}")
            })?;
            ensure(zeta_ref(c64(1.0, 0.0)).is_err(), || "ζ(1) accepted".into())
        }),
        Check::new(s, "eta = (1-2^(1-s)) zeta, 20 random points", move || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
            for _ in 0..20 {
                let z = c64(rng.gen_range(0.3..4.0), rng.gen_range(-30.0..30.0));
                if (z - 1.0).norm() < 0.1 {
                    continue;
                }
                let eta = eta_ref(z).map_err(|e| e.to_string())?;
                let zeta = zeta_ref(z).map_err(|e| e.to_string())?;
                let factor = 1.0 - ((1.0 - z) * LN_2).exp();
                ensure(relative(factor * zeta, eta) < 1e-12, || format!("s={z}"))?;
                let lower = eta_ref_with_order(z, 56).map_err(|e| e.to_string())?;
                ensure(relative(lower, eta) < 1e-12, || {
                    format!("s={z}: orders 56 and 64 differ")
                })?;
            }
            Ok(())
        }),
        Check::new(s, "log integral equals gamma", || {
            for x in [0.5, 1.0, 2.25] {
                let z = c64(x, 0.0);
                let r =
                    gamma_integral(z, &QuadConfig::with_tol(1e-12)).map_err(|e| e.to_string())?;
                let g = gamma_ref(z + 1.0).map_err(|e| e.to_string())?;
                ensure(relative(r.value, g) < 1e-9, || {
                    format!("s={x}: {} vs {g}", r.value)
                })?;
            }
            Ok(())
        }),
        Check::new(s, "quadrature examples", || {
            let cfg = QuadConfig::default();
            let sq = quad_adaptive(|t| c64(t * t, 0.0), Domain::Finite { a: 0.0, b: 1.0 }, &cfg)
                .map_err(|e| e.to_string())?;
            ensure((sq.value.re - 1.0 / 3.0).abs() < 1e-12, || {
                format!("∫t² = {}", sq.value)
            })?;
            let cube = quad_adaptive(
                |x| c64((1.0 - 2.0 * x).powi(3), 0.0),
                Domain::Finite { a: 0.0, b: 0.5 },
                &cfg,
            )
            .map_err(|e| e.to_string())?;
            ensure((cube.value.re - 0.125).abs() < 1e-12, || {
                format!("∫(1-2x)³ = {}", cube.value)
            })?;
            let ln2 = left_integral_quadrature(c64(1.0, 0.0), &cfg).map_err(|e| e.to_string())?;
            ensure((ln2.value.re - LN_2).abs() < 1e-10, || {
                format!("∫1/(1+e^t) = {}", ln2.value)
            })
        }),
    ]
}

fn integral_checks(d: usize) -> Vec<Check> {
    let s = Suite::Integral;
    let top = d.min(MAX_INTEGRAL_N);
    let mut out = Vec::new();
    for n in 0..=top {
        for x in [0.75, 1.5] {
            out.push(Check::new(s, format!("identity n={n} s={x}"), move || {
                let r = integral_identity_check(c64(x, 0.0), n, &QuadConfig::with_tol(1e-11))
                    .map_err(|e| e.to_string())?;
                ensure(r.rel_diff < 1e-8, || {
                    format!("lhs {} rhs {} rel {:e}", r.lhs, r.rhs, r.rel_diff)
                })
            }));
        }
    }
    out.push(Check::new(
        s,
        format!("integration by parts n<={}", top.min(3)),
        move || {
            let z = c64(1.5, 0.0);
            let base = eta_gamma(z).map_err(|e| e.to_string())?;
            for n in 0..=top.min(3) {
                let v = parts_form_quadrature(z, n, &QuadConfig::with_tol(1e-11))
                    .map_err(|e| e.to_string())?;
                ensure(relative(v, base) < 1e-8, || format!("n={n}: {v} vs {base}"))?;
            }
            Ok(())
        },
    ));
    out.push(Check::new(s, "left integral at s=1/2", || {
        let z = c64(0.5, 0.0);
        let r =
            left_integral_quadrature(z, &QuadConfig::with_tol(1e-12)).map_err(|e| e.to_string())?;
        let want = eta_gamma(z).map_err(|e| e.to_string())?;
        ensure(relative(r.value, want) < 1e-10, || {
            format!("{} vs {want}", r.value)
        })
    }));
    out
}

/// Brute-force references used by the checks above.
pub mod oracles {
    use super::*;

    /// Counts of permutations of `n` elements by number of cycles and by
    /// number of ascents.
    pub fn permutation_statistics(n: usize) -> (Vec<u64>, Vec<u64>) {
        let mut cycles = vec![0u64; n + 1];
        let mut ascents = vec![0u64; n + 1];
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut seen = vec![false; n];
            let mut c = 0;
            for i in 0..n {
                if !seen[i] {
                    c += 1;
                    let mut j = i;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                    }
                }
            }
            cycles[c] += 1;
            ascents[perm.windows(2).filter(|w| w[0] < w[1]).count()] += 1;
            if !next_permutation(&mut perm) {
                break;
            }
        }
        if n == 0 {
            // the empty permutation has no ascents
            cycles = vec![1];
            ascents = vec![1];
        }
        (cycles, ascents)
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len())
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    /// Counts of set partitions of `n` elements by number of blocks.
    pub fn set_partition_blocks(n: usize) -> Vec<u64> {
        fn walk(i: usize, n: usize, blocks: usize, out: &mut [u64]) {
            if i == n {
                out[blocks] += 1;
                return;
            }
            for b in 0..=blocks {
                walk(i + 1, n, blocks.max(b + 1), out);
            }
        }
        let mut out = vec![0u64; n + 1];
        walk(0, n, 0, &mut out);
        out
    }

    /// Bell numbers `B_0..=B_n` by the Bell triangle.
    pub fn bell_numbers(n: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::one()];
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![row.last().expect("nonempty").clone()];
            for v in &row {
                let t = next.last().expect("nonempty") + v;
                next.push(t);
            }
            out.push(next[0].clone());
            row = next;
        }
        out
    }

    /// `B_{n,k}(x)` summed over all set partitions of `n` elements into `k` blocks.
    pub fn bell_by_partitions(n: usize, k: usize, xs: &SequenceSpec) -> Rational {
        fn walk(
            i: usize,
            n: usize,
            sizes: &mut Vec<usize>,
            k: usize,
            xs: &[Rational],
            acc: &mut Rational,
        ) {
            if sizes.len() > k {
                return;
            }
            if i == n {
                if sizes.len() == k {
                    *acc += sizes.iter().fold(Rational::one(), |p, &m| p * &xs[m - 1]);
                }
                return;
            }
            for b in 0..sizes.len() {
                sizes[b] += 1;
                walk(i + 1, n, sizes, k, xs, acc);
                sizes[b] -= 1;
            }
            sizes.push(1);
            walk(i + 1, n, sizes, k, xs, acc);
            sizes.pop();
        }
        let mut acc = Rational::zero();
        walk(0, n, &mut Vec::new(), k, &xs.terms, &mut acc);
        acc
    }

    /// `[t^n] ((1+t)/(1-t))^x` as a polynomial in `x`, from the product of
    /// `(1+t)^x = Σ C(x,j) t^j` and `(1-t)^{-x} = Σ x^{(j)}/j! t^j`.
    pub fn mittag_leffler_gf_coeff(n: usize) -> Poly<Rational> {
        let x_plus = |c: i64| Poly::new(vec![q(c, 1), Rational::one()]);
        let falling = |j: usize| {
            (0..j)
                .fold(Poly::constant(Rational::one()), |acc, i| {
                    acc * x_plus(-(i as i64))
                })
                .scale(&Rational::new(BigInt::one(), factorial(j)))
        };
        let rising = |j: usize| {
            (0..j)
                .fold(Poly::constant(Rational::one()), |acc, i| {
                    acc * x_plus(i as i64)
                })
                .scale(&Rational::new(BigInt::one(), factorial(j)))
        };
        (0..=n).fold(Poly::zero(), |acc, j| acc + falling(j) * rising(n - j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn brute_force_oracles() {
        let (cycles, ascents) = oracles::permutation_statistics(4);
        assert_eq!(cycles, vec![0, 6, 11, 6, 1]);
        assert_eq!(ascents, vec![1, 11, 11, 1, 0]);
        assert_eq!(oracles::set_partition_blocks(4), vec![0, 1, 7, 6, 1]);
        let bell: Vec<BigInt> = [1, 1, 2, 5, 15, 52]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(oracles::bell_numbers(5), bell);
    }

    #[test]
    fn small_depth_suites_pass() {
        let cfg = VerifyConfig {
            depth: 4,
            seed: DEFAULT_SEED,
        };
        for suite in [Suite::Stirling, Suite::Ml, Suite::Poly, Suite::Bell] {
            for outcome in run_all(&checks(suite, cfg)) {
                assert!(outcome.passed, "{outcome:?}");
            }
        }
    }

    #[test]
    fn failing_check_carries_witness() {
        let c = Check::new(Suite::C, "broken", || ensure(false, || "witness".into()));
        let o = c.run();
        assert!(!o.passed);
        assert_eq!(o.witness.as_deref(), Some("witness"));
    }
}
