//! Command-line front end for the pcf library.
//!
//! Every subcommand validates its inputs before dispatch and reports
//! results on stdout (human-readable by default, machine-readable with
//! `--json`); diagnostics go to stderr. Exit codes: 0 success, 1 invalid
//! input, 2 a result that is empty for structural reasons (no p-adic root,
//! zero polynomial, divergent input), 3 internal failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::io::Write;

use pcf::cf::{self, Pcf};
use pcf::convergence;
use pcf::error::Error;
use pcf::exact::{parse_rational, Rational};
use pcf::families13;
use pcf::loci;
use pcf::pell;
use pcf::quad::QuadPoly;
use pcf::radical03;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_EMPTY_BY_THEORY: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "pcf",
    about = "p-adic convergence of periodic continued fractions over Z[1/p]",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of a human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches (falls back to PCF_THREADS, then to all
    /// cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PcfArgs {
    /// The odd prime p (the ambient ring is Z[1/p]).
    #[arg(long)]
    p: u64,
    /// Comma-separated period entries, e.g. "13,9/53,-4".
    #[arg(long)]
    period: String,
    /// Comma-separated preperiod entries.
    #[arg(long, default_value = "")]
    preperiod: String,
}

#[derive(Subcommand)]
enum Command {
    /// Decide p-adic convergence of a periodic continued fraction.
    Check(PcfArgs),
    /// Compute the p-adic limit of a convergent continued fraction.
    Limit {
        #[command(flatten)]
        pcf: PcfArgs,
        /// Unit digits of p-adic precision.
        #[arg(long, default_value_t = 8)]
        prec: u32,
    },
    /// The quadratic invariant Quad(P), cross-checked against the
    /// closed-form table rows for small types.
    Quad(PcfArgs),
    /// Test membership of a continued fraction in V(F).
    Member {
        #[command(flatten)]
        pcf: PcfArgs,
        /// Coefficients A,B,C of F.
        #[arg(long)]
        poly: String,
    },
    /// Enumerate a variety locus and its convergent subset.
    Locus {
        /// The type N,k: one of 0,1 / 1,1 / 2,1 / 0,2 / 1,2.
        #[arg(long = "type")]
        ty: String,
        /// Coefficients A,B,C of F.
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: u64,
        /// Height bound for scan candidates m/p^j (|m| <= height).
        #[arg(long, default_value_t = 1000)]
        height: u64,
        /// Valuation depth bound for scan candidates (j <= valdepth).
        #[arg(long, default_value_t = 12)]
        valdepth: u32,
        /// For type 1,2: query a single preperiod value instead of
        /// scanning.
        #[arg(long)]
        b1: Option<String>,
    },
    /// Search type-(0,3) expansions of sqrt(d) through Pell classes.
    Search03 {
        #[arg(long)]
        d: i64,
        /// Restrict to one prime; all primes found along orbits otherwise.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long = "max-index", default_value_t = 25)]
        max_index: u32,
    },
    /// Construct the explicit expansion families.
    Family {
        /// One of: a2plus1, negpell, family13.
        #[arg(long)]
        kind: String,
        /// Parameter a (a2plus1: d = a^2 + 1; family13: the preperiod).
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long = "max-n")]
        max_n: Option<u32>,
        /// First period entry for the family13 slice.
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        /// Prime for the a1 = 2 specialization of family13.
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Shorthand for `family --kind family13`.
    Family13 {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Pell-equation data: fundamental unit, negative Pell, class
    /// fundamentals of x^2 - d y^2 = n.
    Pell {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: Option<i64>,
    },
    /// Cross-check convergence from exact convergents.
    Oracle {
        #[command(flatten)]
        pcf: PcfArgs,
        #[arg(long, default_value_t = 8)]
        prec: i64,
        /// Window n0,n1 of convergent indices.
        #[arg(long, default_value = "10,60")]
        window: String,
    },
}

/// Run the CLI on the given arguments, writing results to `out` and
/// diagnostics to `err`.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            }
        }
    };
    if let Some(threads) = cli.threads.or_else(threads_from_env) {
        // ignore the error when a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var("PCF_THREADS").ok()?.parse().ok()
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ZeroPolynomial
            | Error::NotConvergent(_)
            | Error::NoNegativePell(_)
            | Error::ZeroLeadingCoeff => EXIT_EMPTY_BY_THEORY,
            Error::PrecisionExhausted | Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_rational_list(s: &str) -> Result<Vec<Rational>, Failure> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| parse_rational(tok).map_err(Failure::from))
        .collect()
}

fn parse_pcf(args: &PcfArgs) -> Result<Pcf, Failure> {
    let preperiod = parse_rational_list(&args.preperiod)?;
    let period = parse_rational_list(&args.period)?;
    Pcf::new(args.p, preperiod, period).map_err(Failure::from)
}

fn parse_poly(s: &str) -> Result<QuadPoly, Failure> {
    let coeffs = parse_rational_list(s)?;
    if coeffs.len() != 3 {
        return Err(Failure::invalid(format!(
            "--poly expects A,B,C (got {} values)",
            coeffs.len()
        )));
    }
    Ok(QuadPoly::new(
        coeffs[0].clone(),
        coeffs[1].clone(),
        coeffs[2].clone(),
    ))
}

fn parse_pair(s: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Failure::invalid(format!("expected two values, got {s:?}")));
    }
    let a = parts[0]
        .parse()
        .map_err(|_| Failure::invalid(format!("bad index {:?}", parts[0])))?;
    let b = parts[1]
        .parse()
        .map_err(|_| Failure::invalid(format!("bad index {:?}", parts[1])))?;
    Ok((a, b))
}

fn emit<W: Write, T: Serialize>(
    cli: &Cli,
    out: &mut W,
    value: &T,
    human: impl FnOnce(&mut W) -> std::io::Result<()>,
) -> Result<(), Failure> {
    let io = if cli.json {
        serde_json::to_writer(&mut *out, value)
            .map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            })
            .and_then(|()| writeln!(out).map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: e.to_string(),
            }))
    } else {
        human(out).map_err(|e| Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        })
    };
    io
}

fn describe_limit(value: &convergence::Limit) -> String {
    match value {
        convergence::Limit::ExactRational(x) => format!("{x} (exact)"),
        convergence::Limit::Infinity => "infinity".into(),
        convergence::Limit::PAdic(x) => x.to_string(),
    }
}

fn dispatch<W: Write>(cli: &Cli, out: &mut W) -> Result<(), Failure> {
    match &cli.command {
        Command::Check(args) => {
            let pcf = parse_pcf(args)?;
            let report = convergence::check_convergence(&pcf);
            emit(cli, out, &report, |w| {
                writeln!(w, "convergent: {}", report.convergent)?;
                writeln!(
                    w,
                    "trace: {} (valuation {})",
                    report.trace, report.trace_valuation
                )?;
                match report.failed_condition {
                    convergence::FailedCondition::None => Ok(()),
                    convergence::FailedCondition::TraceTooSmall => {
                        writeln!(w, "failed: trace condition")
                    }
                    convergence::FailedCondition::ShiftCondition(j) => {
                        writeln!(w, "failed: shift condition at j = {j}")
                    }
                }
            })
        }
        Command::Limit { pcf: args, prec } => {
            let pcf = parse_pcf(args)?;
            let value = convergence::limit(&pcf, *prec)?;
            emit(cli, out, &value, |w| {
                writeln!(w, "limit: {}", describe_limit(&value))
            })
        }
        Command::Quad(args) => {
            let pcf = parse_pcf(args)?;
            let quad = cf::quad_of(&pcf);
            let table = cf::closed_form_quad(pcf.preperiod(), pcf.period());
            let table_status = match &table {
                Some(expected) if *expected == quad => "match",
                Some(_) => "mismatch",
                None => "n/a",
            };
            #[derive(Serialize)]
            struct QuadOutput<'a> {
                quad: &'a QuadPoly,
                #[serde(rename = "zeroQuad")]
                zero_quad: bool,
                #[serde(rename = "closedForm")]
                closed_form: &'a str,
            }
            if table_status == "mismatch" {
                return Err(Failure {
                    code: EXIT_INTERNAL,
                    message: "closed-form table disagrees with the E matrix".into(),
                });
            }
            let output = QuadOutput {
                quad: &quad,
                zero_quad: quad.is_zero(),
                closed_form: table_status,
            };
            emit(cli, out, &output, |w| {
                writeln!(w, "Quad: {quad}")?;
                writeln!(w, "closed-form cross-check: {table_status}")
            })
        }
        Command::Member { pcf: args, poly } => {
            let pcf = parse_pcf(args)?;
            let f = parse_poly(poly)?;
            let membership = cf::variety_membership(&pcf, &f)?;
            emit(cli, out, &membership, |w| {
                writeln!(w, "member: {}", membership.member)?;
                if membership.zero_quad {
                    writeln!(w, "note: Quad(P) is the zero triple")?;
                }
                Ok(())
            })
        }
        Command::Locus {
            ty,
            poly,
            p,
            height,
            valdepth,
            b1,
        } => {
            let f = parse_poly(poly)?;
            let result = match (ty.trim(), b1) {
                ("0,1", _) => loci::locus_0_1(&f, *p)?,
                ("1,1", _) => loci::locus_1_1(&f, *p)?,
                ("2,1", _) => loci::locus_2_1(&f, *p, *height, *valdepth)?,
                ("0,2", _) => loci::locus_0_2(&f, *p)?,
                ("1,2", Some(b1)) => {
                    let b1 = parse_rational(b1)?;
                    loci::locus_1_2_at(&f, *p, &b1)?
                }
                ("1,2", None) => loci::locus_1_2_scan(&f, *p, *height, *valdepth)?,
                (other, _) => {
                    return Err(Failure::invalid(format!(
                        "--type must be one of 0,1 / 1,1 / 2,1 / 0,2 / 1,2 (got {other:?})"
                    )))
                }
            };
            emit(cli, out, &result, |w| print_locus(w, &result))
        }
        Command::Search03 { d, p, max_index } => {
            let found = radical03::search_0_3(*d, *p, *max_index, None)?;
            emit(cli, out, &found, |w| {
                for sol in &found {
                    writeln!(
                        w,
                        "p = {}: [overline({}, {}, {})]  (s = {})",
                        sol.p,
                        sol.a1,
                        sol.a2(),
                        sol.a3,
                        sol.s
                    )?;
                }
                writeln!(w, "{} solution(s)", found.len())
            })
        }
        Command::Family {
            kind,
            a,
            d,
            max_n,
            a1,
            p,
            prime,
            k,
        } => {
            let missing = |flag: &str| Failure::invalid(format!("--{flag} is required"));
            match kind.as_str() {
                "a2plus1" => {
                    let a = a.as_ref().ok_or_else(|| missing("a"))?;
                    let a: i64 = a
                        .parse()
                        .map_err(|_| Failure::invalid(format!("bad integer {a:?}")))?;
                    let max_n = max_n.ok_or_else(|| missing("max-n"))?;
                    let found = radical03::family_a2_plus_1(a, max_n)?;
                    emit(cli, out, &found, |w| print_solutions(w, &found))
                }
                "negpell" => {
                    let d = d.ok_or_else(|| missing("d"))?;
                    let max_n = max_n.ok_or_else(|| missing("max-n"))?;
                    let found = radical03::family_neg_pell(d, max_n)?;
                    emit(cli, out, &found, |w| print_solutions(w, &found))
                }
                "family13" => {
                    run_family13(cli, out, a.as_deref(), a1.as_deref(), *p, *prime, *k)
                }
                other => Err(Failure::invalid(format!(
                    "--kind must be a2plus1, negpell, or family13 (got {other:?})"
                ))),
            }
        }
        Command::Family13 { a, a1, p, prime, k } => {
            run_family13(cli, out, a.as_deref(), a1.as_deref(), *p, *prime, *k)
        }
        Command::Pell { d, n } => {
            let unit = pell::fundamental_unit(*d)?;
            let negative = pell::neg_pell(*d)?;
            let classes = match n {
                Some(n) => {
                    if *n == 0 {
                        return Err(Failure::invalid("--n must be nonzero"));
                    }
                    Some(pell::pell_classes(*d, &num_bigint::BigInt::from(*n), None)?)
                }
                None => None,
            };
            #[derive(Serialize)]
            struct PellOutput {
                d: u64,
                unit: [String; 2],
                #[serde(rename = "negPell")]
                neg_pell: Option<[String; 2]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                n: Option<i64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                fundamentals: Option<Vec<[String; 2]>>,
            }
            let output = PellOutput {
                d: *d,
                unit: [unit.u_star.to_string(), unit.v_star.to_string()],
                neg_pell: negative
                    .as_ref()
                    .map(|(s, t)| [s.to_string(), t.to_string()]),
                n: *n,
                fundamentals: classes.as_ref().map(|set| {
                    set.fundamentals
                        .iter()
                        .map(|(u, v)| [u.to_string(), v.to_string()])
                        .collect()
                }),
            };
            emit(cli, out, &output, |w| {
                writeln!(w, "unit: ({}, {})", unit.u_star, unit.v_star)?;
                match &negative {
                    Some((s, t)) => writeln!(w, "negative Pell: ({s}, {t})")?,
                    None => writeln!(w, "negative Pell: none")?,
                }
                if let Some(set) = &classes {
                    writeln!(w, "fundamental solutions of x^2 - {d} y^2 = {}:", set.n)?;
                    for (u, v) in &set.fundamentals {
                        writeln!(w, "  ({u}, {v})")?;
                    }
                }
                Ok(())
            })
        }
        Command::Oracle {
            pcf: args,
            prec,
            window,
        } => {
            let pcf = parse_pcf(args)?;
            let window = parse_pair(window)?;
            let report = convergence::oracle_converges(&pcf, *prec, window)?;
            emit(cli, out, &report, |w| {
                writeln!(w, "consistent: {}", report.consistent)?;
                writeln!(w, "witness: {}", report.witness)
            })
        }
    }
}

fn run_family13<W: Write>(
    cli: &Cli,
    out: &mut W,
    a: Option<&str>,
    a1: Option<&str>,
    p: Option<u64>,
    prime: Option<u64>,
    k: Option<u32>,
) -> Result<(), Failure> {
    let missing = |flag: &str| Failure::invalid(format!("--{flag} is required"));
    let result = if let Some(prime) = prime {
        let k = k.ok_or_else(|| missing("k"))?;
        families13::family_1_3_prime(prime, k)?
    } else {
        let a = a.ok_or_else(|| missing("a"))?;
        let a1 = a1.ok_or_else(|| missing("a1"))?;
        let p = p.ok_or_else(|| missing("p"))?;
        let a = parse_rational(a)?;
        let a1 = parse_rational(a1)?;
        families13::family_1_3_general(&a, &a1, p)?
    };
    emit(cli, out, &result, |w| {
        writeln!(w, "pcf: {}", result.pcf)?;
        writeln!(w, "d: {}", result.d)?;
        writeln!(w, "convergent: {}", result.convergence.convergent)?;
        if let Some(cond) = result.necessary_condition {
            writeln!(w, "necessary condition holds: {cond}")?;
        }
        Ok(())
    })
}

fn print_locus<W: Write>(w: &mut W, result: &loci::LocusResult) -> std::io::Result<()> {
    writeln!(w, "complete: {}", result.complete)?;
    for pt in &result.points {
        let coords: Vec<String> = pt.coords.iter().map(|x| x.to_string()).collect();
        let tail = match (&pt.limit, pt.convergent) {
            (Some(value), true) => format!("convergent, limit {}", describe_limit(value)),
            _ => "not convergent".into(),
        };
        writeln!(w, "({}) {}", coords.join(", "), tail)?;
    }
    for fam in &result.families {
        writeln!(w, "family [{}]: {}", fam.kind, fam.description)?;
    }
    for note in &result.notes {
        writeln!(w, "note: {note}")?;
    }
    Ok(())
}

fn print_solutions<W: Write>(
    w: &mut W,
    found: &[radical03::Radical03Solution],
) -> std::io::Result<()> {
    for sol in found {
        writeln!(
            w,
            "d = {}, p = {}: [overline({}, {}, {})]",
            sol.d,
            sol.p,
            sol.a1,
            sol.a2(),
            sol.a3
        )?;
    }
    writeln!(w, "{} solution(s)", found.len())
}
