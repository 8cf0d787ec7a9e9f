//! `fallfac` command-line interface.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fallfac::report::Path;
use fallfac::verify::{Suite, DEFAULT_SEED};
use fallfac::Family;
use num_complex::Complex64;

/// Exit status contract.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const DOMAIN: u8 = 3;
    pub const BUDGET: u8 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "fallfac",
    version,
    about = "Coefficient tables, falling-factorial series for Γ and ζ, and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Gamma,
    Zeta,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print an exact coefficient triangle.
    Tables(TablesArgs),
    /// Evaluate a series expansion at one truncation.
    Eval(EvalArgs),
    /// Sample partial sums and errors along the truncation.
    Converge(ConvergeArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// Compare both sides of the integral identity for P_n.
    IntegralCheck(IntegralArgs),
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// stirling1, stirling2, eulerian, c, a or b
    #[arg(value_parser = parse_family)]
    pub family: Family,
    /// Last row to print.
    #[arg(long = "max", default_value_t = 10)]
    pub max_row: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Evaluation point as `RE` or `RE,IM`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: Complex64,
    #[arg(long, default_value_t = 100)]
    pub terms: usize,
    #[arg(long, value_parser = parse_path, default_value = "direct")]
    pub path: Path,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(value_enum)]
    pub target: Target,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: Complex64,
    #[arg(long, default_value_t = 400)]
    pub max_terms: usize,
    #[arg(long, default_value_t = 20)]
    pub stride: usize,
    #[arg(long, value_parser = parse_path, default_value = "direct")]
    pub path: Path,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, stirling, c, b, ml, poly, bell, oracle or integral
    #[arg(value_parser = parse_suite, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Plain lines by default; `json` for a single record.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct IntegralArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub s: Complex64,
    #[arg(long, default_value_t = 0)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Maximum number of integrand evaluations.
    #[arg(long, default_value_t = 2_000_000)]
    pub budget: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_path(s: &str) -> Result<Path, String> {
    s.parse()
}

/// `RE` or `RE,IM` as plain decimal literals.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parse = |part: &str| -> Option<f64> {
        let part = part.trim();
        let decimal = part
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        let v: f64 = if decimal { part.parse().ok()? } else { None? };
        v.is_finite().then_some(v)
    };
    let parsed = match text.split_once(',') {
        None => parse(text).map(|re| Complex64::new(re, 0.0)),
        Some((re, im)) => parse(re)
            .zip(parse(im))
            .map(|(re, im)| Complex64::new(re, im)),
    };
    parsed.ok_or_else(|| format!("expected `RE` or `RE,IM`, got `{text}`"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Tables(a) => commands::tables(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Converge(a) => commands::converge(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::IntegralCheck(a) => commands::integral_check(&a),
    };
    match result {
        Ok(emission) => {
            print!("{}", emission.text);
            ExitCode::from(emission.code)
        }
        Err(failure) => {
            eprintln!("fallfac: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
