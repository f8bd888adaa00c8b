//! Command line front end. The binary is a thin wrapper around [`run`].

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{
    check_case3, check_case4, primes_in, scan_integrality, ser_int, CongruenceReport,
};
use crate::diffspace::{analyze, ReductionCertificate};
use crate::hyperseries::TermValueStream;
use crate::polycore::{format_rat, parse_rat, rat_serde, Poly, Rat};
use crate::symred::{
    half4_reduce, integral_reduce_alt, integral_reduce_same, IntegralReduction, Sign, TermSpec,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CERT_FAIL: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

/// Environment variable capping the sweep thread count.
pub const THREADS_ENV: &str = "HYPERRED_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "hyperred",
    version,
    about = "Hypergeometric polynomial reduction and super-congruence checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print u, d, m0 and the degeneration flag of the pair (a, b).
    Analyze {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Reduce f modulo the difference space of (a, b).
    Reduce {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Solve the linear system directly instead of running the reduction.
        #[arg(long)]
        oracle: bool,
    },
    /// Check a certificate; exit 0 on pass, 2 on failure.
    Certify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Integral reduction of (2Dk + Dα)^m for (±1)^k ((α)_k / k!)^r. The
    /// output x is applied as x(2Dk) inside Δ(prefactor · k^r · x(2Dk) · t_k).
    ReduceSymmetric {
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        special: Option<Special>,
    },
    /// Exact value of t_k.
    Eval {
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: usize,
    },
    /// Exact partial sum of f(k) t_k for k = 0..=K.
    Sum {
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        f: PathBuf,
        #[arg(long = "K")]
        upper: usize,
    },
    /// Sweep the mod p^4 congruences over odd m and primes p.
    Congruence {
        #[arg(long, value_parser = ["3", "4"])]
        case: String,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        p_max: u64,
        /// Smallest prime included in the sweep.
        #[arg(long, default_value_t = 5)]
        p_min: u64,
        #[arg(long)]
        json: bool,
    },
    /// Report whether a_m / ((m-1)/2)! is an integer for odd m.
    ScanIntegrality {
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Alt,
    Same,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Alt => Sign::Alt,
            SignArg::Same => Sign::Same,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Special {
    Half4,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::HypothesisViolation(_)
            | Error::ShiftViolation { .. }
            | Error::SymmetryViolation { .. }
            | Error::NotParityPure { .. }
            | Error::ZeroInput(_) => EXIT_HYPOTHESIS,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_failure(message: String) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message,
    }
}

/// JSON view of an [`IntegralReduction`].
#[derive(Serialize)]
struct IntegralReductionJson {
    m: u32,
    sign: Sign,
    #[serde(with = "rat_serde")]
    alpha: Rat,
    r: u32,
    #[serde(rename = "C", serialize_with = "ser_int")]
    scale: BigInt,
    a: BTreeMap<usize, serde_json::Number>,
    #[serde(rename = "a_over_C")]
    scaled: BTreeMap<usize, String>,
    x: Vec<serde_json::Number>,
    #[serde(serialize_with = "ser_int")]
    prefactor: BigInt,
}

fn json_int(v: &BigInt) -> serde_json::Number {
    v.to_string().parse().expect("integer literal")
}

impl From<&IntegralReduction> for IntegralReductionJson {
    fn from(red: &IntegralReduction) -> Self {
        IntegralReductionJson {
            m: red.m,
            sign: red.spec.sign,
            alpha: red.spec.alpha.clone(),
            r: red.spec.r,
            scale: red.scale.clone(),
            a: red
                .coeffs_a
                .iter()
                .map(|(&i, v)| (i, json_int(v)))
                .collect(),
            scaled: red
                .scaled_coeffs()
                .iter()
                .map(|(&i, v)| (i, format_rat(v)))
                .collect(),
            x: red.x_integer_coeffs().iter().map(json_int).collect(),
            prefactor: red.prefactor.clone(),
        }
    }
}

fn read_poly(path: &Path) -> Result<Poly, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn read_cert(path: &Path) -> Result<ReductionCertificate, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| parse_failure(format!("{}: {e}", path.display())))
}

fn term_spec(sign: SignArg, alpha: &str, r: u32) -> Result<TermSpec, Failure> {
    let alpha = parse_rat(alpha)?;
    if r == 0 {
        return Err(parse_failure("--r must be positive".into()));
    }
    Ok(TermSpec::new(sign.into(), alpha, r)?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn thread_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    builder.build().expect("thread pool")
}

/// Runs every `(m, p)` check of one case, sorted by `(m, p)`.
pub fn congruence_sweep(
    case: u8,
    m_max: u32,
    p_min: u64,
    p_max: u64,
) -> crate::Result<Vec<CongruenceReport>> {
    let jobs: Vec<(u32, u64)> = (1..=m_max)
        .step_by(2)
        .flat_map(|m| {
            let mu = ((m - 1) / 2) as u64;
            let lo = match case {
                3 => p_min.max(5),
                _ => p_min.max(3).max(mu + 1),
            };
            primes_in(lo, p_max).into_iter().map(move |p| (m, p))
        })
        .collect();
    let mut out: Vec<CongruenceReport> = thread_pool().install(|| {
        jobs.par_iter()
            .map(|&(m, p)| match case {
                3 => check_case3(m, p),
                _ => check_case4(m, p),
            })
            .collect::<crate::Result<_>>()
    })?;
    out.sort_by_key(|r| (r.m, r.p));
    Ok(out)
}

/// Executes one command, writing results to `out` and diagnostics to `err`,
/// and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure {
        code: EXIT_FAILURE,
        message: e.to_string(),
    };
    match cmd {
        Command::Analyze { a, b } => {
            let info = analyze(&read_poly(&a)?, &read_poly(&b)?)?;
            writeln!(out, "{}", to_json(&info)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Reduce { a, b, f, oracle } => {
            let info = analyze(&read_poly(&a)?, &read_poly(&b)?)?;
            let f = read_poly(&f)?;
            let cert = if oracle {
                info.oracle_reduce(&f, &info.spanning_exponents())?
            } else {
                info.reduce(&f)
            };
            writeln!(out, "{}", to_json(&cert)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Certify { a, b, f, cert } => {
            let info = analyze(&read_poly(&a)?, &read_poly(&b)?)?;
            let report = info.verify_certificate(&read_poly(&f)?, &read_cert(&cert)?);
            writeln!(out, "{}", to_json(&report)).map_err(io)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_CERT_FAIL })
        }
        Command::ReduceSymmetric {
            sign,
            alpha,
            r,
            m,
            special,
        } => {
            let spec = term_spec(sign, &alpha, r)?;
            let red = match special {
                Some(Special::Half4) => {
                    if spec != TermSpec::half_quartic() {
                        return Err(Error::HypothesisViolation(
                            "--special half4 needs --sign same --alpha 1/2 --r 4".into(),
                        )
                        .into());
                    }
                    half4_reduce(m)?
                }
                None => match spec.sign {
                    Sign::Alt => integral_reduce_alt(&spec, m)?,
                    Sign::Same => integral_reduce_same(&spec, m)?,
                },
            };
            writeln!(out, "{}", to_json(&IntegralReductionJson::from(&red))).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Eval { sign, alpha, r, k } => {
            let mut stream = TermValueStream::new(term_spec(sign, &alpha, r)?);
            writeln!(out, "{}", format_rat(stream.get(k))).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Sum {
            sign,
            alpha,
            r,
            f,
            upper,
        } => {
            let mut stream = TermValueStream::new(term_spec(sign, &alpha, r)?);
            let v = stream.partial_sum(&read_poly(&f)?, upper);
            writeln!(out, "{}", format_rat(&v)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Congruence {
            case,
            m_max,
            p_max,
            p_min,
            json,
        } => {
            let case: u8 = if case == "3" { 3 } else { 4 };
            let reports = congruence_sweep(case, m_max, p_min, p_max)?;
            if json {
                writeln!(out, "{}", to_json(&reports)).map_err(io)?;
            } else {
                writeln!(
                    out,
                    "{:>4} {:>5} {:>14} {:>14} {:>24} {:>12}  result",
                    "m", "p", "lhs mod p^4", "rhs mod p^4", "a_m", "c_m"
                )
                .map_err(io)?;
                for r in &reports {
                    let c = r.c_m.as_ref().map_or("-".to_string(), |c| c.to_string());
                    writeln!(
                        out,
                        "{:>4} {:>5} {:>14} {:>14} {:>24} {:>12}  {}",
                        r.m,
                        r.p,
                        r.lhs_residue,
                        r.rhs_residue,
                        r.a_m,
                        c,
                        if r.pass { "pass" } else { "FAIL" }
                    )
                    .map_err(io)?;
                }
            }
            Ok(if reports.iter().all(|r| r.pass) {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::ScanIntegrality { m_max, json } => {
            let scan = scan_integrality(m_max)?;
            if json {
                writeln!(out, "{}", to_json(&scan)).map_err(io)?;
            } else {
                writeln!(out, "{:>4}  {:>40}  integer", "m", "a_m / ((m-1)/2)!").map_err(io)?;
                for e in &scan {
                    writeln!(
                        out,
                        "{:>4}  {:>40}  {}",
                        e.m,
                        e.a_m_over_factorial.to_string(),
                        if e.is_integer { "yes" } else { "NO" }
                    )
                    .map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
