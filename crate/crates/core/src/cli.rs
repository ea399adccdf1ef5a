//! The `rvaluation` command line: `integrate`, `eval` and `laws`.
//!
//! Exit codes: 0 success, 1 input error, 2 depth cap reached before the
//! requested width, 3 law violation.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::drag::{parse_rational, ExtNonNeg, IntervalValue};
use crate::error::Error;
use crate::laws::{self, Family, Fault, LawConfig, LawReport};
use crate::lebesgue::{canonical_extension, Lebesgue, Refinement, DEFAULT_DEPTH_CAP, MAX_DEPTH_CAP};
use crate::measure::rval_evaluate;
use crate::syntax::{parse_measure, parse_monotone_map, parse_piecewise, parse_poset, parse_valuation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEPTH_CAP: i32 = 2;
pub const EXIT_LAW: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rvaluation", version, about = "Exact interval-valued valuations and integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print ℓₙ(h) for n = 0, 1, … until the width is at most eps.
    Integrate(IntegrateArgs),
    /// Evaluate a valuation, or rval of a measure, at a test function.
    Eval(EvalArgs),
    /// Run the law suites and print a pass/fail table.
    Laws(LawsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    /// Piecewise function literal, or a path to a file holding one.
    #[arg(long = "fn", value_name = "SPEC|PATH")]
    function: String,
    /// Target width, an exact rational such as 1/1000.
    #[arg(long, value_name = "RATIONAL")]
    eps: String,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH_CAP as i64))]
    depth_cap: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for grid evaluation; output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
    threads: u32,
    /// Add decimal columns rounded outward to this many places.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u32).range(0..=60))]
    approx_decimals: Option<u32>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Poset literal or path.
    #[arg(long)]
    poset: String,
    /// Elementary valuation literal or path.
    #[arg(long, conflicts_with = "measure", required_unless_present = "measure")]
    val: Option<String>,
    /// Measure literal or path; evaluates rval of the measure.
    #[arg(long)]
    measure: Option<String>,
    /// Interval-valued test function literal or path.
    #[arg(long = "fn", value_name = "SPEC|PATH")]
    function: String,
    /// Structured output instead of the bare interval.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct LawsArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized cases per family; defaults differ by family.
    #[arg(long)]
    cases: Option<usize>,
    /// Run only these families (drag, monad, strength, fubini, choquet,
    /// integrals, rval, view, lebesgue).
    #[arg(long = "family", value_name = "NAME")]
    families: Vec<Family>,
    /// Largest n for the Lebesgue chain family.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(0..=MAX_DEPTH_CAP as i64))]
    depth: u32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, hide = true, value_name = "FAULT")]
    inject_fault: Option<Fault>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match cli.command {
        Command::Integrate(a) => integrate(&a, out, err),
        Command::Eval(a) => eval(&a, out),
        Command::Laws(a) => run_laws(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

enum Failure {
    Input(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Reads `arg` as a file if one exists at that path, else as a literal.
fn load(arg: &str) -> Result<(String, String), Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")))?;
        Ok((arg.to_string(), text))
    } else {
        Ok(("<inline>".to_string(), arg.to_string()))
    }
}

fn diagnose(what: &str, label: &str, e: Error) -> Failure {
    match e {
        Error::Parse { line, column, message } => Failure::Input(format!("{what} {label}:{line}:{column}: {message}")),
        other => Failure::Input(format!("{what} {label}: {other}")),
    }
}

fn parsed<T>(what: &str, arg: &str, parse: impl FnOnce(&str) -> crate::error::Result<T>) -> Result<T, Failure> {
    let (label, text) = load(arg)?;
    parse(&text).map_err(|e| diagnose(what, &label, e))
}

/// `x` in decimal with `k` places, rounded down or up.
fn decimal(x: &ExtNonNeg, k: u32, up: bool) -> String {
    let Some(x) = x.as_finite() else {
        return "inf".to_string();
    };
    let scale: BigInt = BigInt::from(10).pow(k);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let (whole, frac) = n.div_rem(&scale);
    if k == 0 {
        whole.to_string()
    } else {
        format!("{whole}.{frac:0>width$}", width = k as usize)
    }
}

#[derive(Serialize)]
struct Row {
    n: u32,
    lo: String,
    hi: String,
    width: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo_approx: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi_approx: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    width_approx: Option<String>,
}

#[derive(Serialize)]
struct Table {
    rows: Vec<Row>,
    converged: bool,
    depth: u32,
}

fn table(run: &Refinement, approx: Option<u32>) -> Table {
    let rows = run
        .rows
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let width = v.width();
            Row {
                n: n as u32,
                lo: v.lo().to_string(),
                hi: v.hi().to_string(),
                width: width.to_string(),
                lo_approx: approx.map(|k| decimal(v.lo(), k, false)),
                hi_approx: approx.map(|k| decimal(v.hi(), k, true)),
                width_approx: approx.map(|k| decimal(&width, k, true)),
            }
        })
        .collect();
    Table {
        rows,
        converged: run.converged,
        depth: run.depth(),
    }
}

fn write_table(t: &Table, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            let json = serde_json::to_string(t).map_err(io::Error::other)?;
            writeln!(out, "{json}")
        }
        Format::Csv => {
            let approx = t.rows.first().is_some_and(|r| r.lo_approx.is_some());
            if approx {
                writeln!(out, "n,lo,hi,width,lo_approx,hi_approx,width_approx")?;
            } else {
                writeln!(out, "n,lo,hi,width")?;
            }
            for r in &t.rows {
                write!(out, "{},{},{},{}", r.n, r.lo, r.hi, r.width)?;
                if let (Some(a), Some(b), Some(c)) = (&r.lo_approx, &r.hi_approx, &r.width_approx) {
                    write!(out, ",{a},{b},{c}")?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

fn integrate(a: &IntegrateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let eps = parse_rational(&a.eps).map_err(|e| Failure::Input(format!("--eps: {e}")))?;
    let f = parsed("--fn", &a.function, parse_piecewise)?;
    let h = canonical_extension(&f).map_err(|e| Failure::Input(format!("--fn: {e}")))?;
    let engine = Lebesgue::new()
        .with_depth_cap(a.depth_cap)
        .and_then(|l| l.with_threads(a.threads as usize))
        .map_err(|e| Failure::Input(e.to_string()))?;
    let run = engine.refine(&h, &eps).map_err(|e| Failure::Input(format!("--eps: {e}")))?;
    write_table(&table(&run, a.approx_decimals), a.format, out)?;
    if run.converged {
        Ok(EXIT_OK)
    } else {
        writeln!(
            err,
            "error: width {} at depth cap {} is above eps {}",
            run.last().width(),
            a.depth_cap,
            a.eps
        )?;
        Ok(EXIT_DEPTH_CAP)
    }
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let space = parsed("--poset", &a.poset, parse_poset)?;
    let h = parsed("--fn", &a.function, |s| parse_monotone_map::<IntervalValue>(s, &space))?;
    let value = match (&a.val, &a.measure) {
        (Some(v), _) => {
            let nu = parsed("--val", v, |s| parse_valuation::<IntervalValue>(s, &space))?;
            nu.evaluate(&h)
        }
        (None, Some(m)) => {
            let mu = parsed("--measure", m, |s| parse_measure(s, &space))?;
            rval_evaluate(&mu, &h)
        }
        (None, None) => unreachable!("clap requires --val or --measure"),
    }
    .map_err(|e| Failure::Input(e.to_string()))?;
    match a.format {
        None => writeln!(out, "{value}")?,
        Some(Format::Json) => {
            let record = EvalRecord {
                value: value.to_string(),
                lo: value.lo().to_string(),
                hi: value.hi().to_string(),
            };
            writeln!(out, "{}", serde_json::to_string(&record).map_err(io::Error::other)?)?
        }
        Some(Format::Csv) => writeln!(out, "lo,hi\n{},{}", value.lo(), value.hi())?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EvalRecord {
    value: String,
    lo: String,
    hi: String,
}

#[derive(Serialize)]
struct LawsRecord<'a> {
    seed: u64,
    families: &'a [FamilyRow],
    passed: bool,
}

#[derive(Serialize)]
struct FamilyRow {
    family: &'static str,
    exhaustive: usize,
    randomized: usize,
    passed: bool,
    counterexample: Option<String>,
}

fn run_laws(a: &LawsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = LawConfig {
        seed: a.seed,
        cases: a.cases,
        lebesgue_depth: a.depth,
        fault: a.inject_fault,
    };
    let families: Vec<Family> = if a.families.is_empty() { Family::ALL.to_vec() } else { a.families.clone() };
    let reports: Vec<LawReport> = families.iter().map(|&f| laws::run(f, &cfg)).collect();
    let rows: Vec<FamilyRow> = reports
        .iter()
        .map(|r| FamilyRow {
            family: r.family.name(),
            exhaustive: r.exhaustive,
            randomized: r.randomized,
            passed: r.passed(),
            counterexample: r.counterexample.as_ref().map(ToString::to_string),
        })
        .collect();
    let all_passed = rows.iter().all(|r| r.passed);
    match a.format {
        Some(Format::Json) => {
            let record = LawsRecord {
                seed: a.seed,
                families: &rows,
                passed: all_passed,
            };
            writeln!(out, "{}", serde_json::to_string(&record).map_err(io::Error::other)?)?;
        }
        Some(Format::Csv) => {
            writeln!(out, "family,exhaustive,randomized,result")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.family, r.exhaustive, r.randomized, verdict(r.passed))?;
            }
        }
        None => {
            writeln!(out, "{:<20} {:>12} {:>12}  result", "family", "exhaustive", "randomized")?;
            for r in &rows {
                writeln!(out, "{:<20} {:>12} {:>12}  {}", r.family, r.exhaustive, r.randomized, verdict(r.passed))?;
            }
        }
    }
    if a.format != Some(Format::Json) {
        for r in rows.iter().filter(|r| !r.passed) {
            writeln!(out, "counterexample in {}: {}", r.family, r.counterexample.as_deref().unwrap_or(""))?;
        }
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_LAW })
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
