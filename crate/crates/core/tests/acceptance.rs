//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads 1` to see them
//! in order.

use std::process::Command;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rvaluation::laws::{self, Family, LawConfig};
use rvaluation::lebesgue::{fixtures, Lebesgue};
use rvaluation::{ExtNonNeg, IntervalValue};

/// Depth for the exact-value criteria.
const DEPTH: u32 = 12;

/// Criteria run one at a time so each runtime budget measures only its own
/// work.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn verdict(id: u32, title: &str, ok: bool, elapsed: Duration, budget: Duration, detail: &str) {
    let within = elapsed <= budget;
    let status = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "\n{status} criterion {id:>2}: {title} ({:.2} s, budget {} s){}{detail}",
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if detail.is_empty() { "" } else { ": " }
    );
    assert!(ok, "criterion {id} ({title}) failed: {detail}");
    assert!(within, "criterion {id} ({title}) took {elapsed:?}, budget {budget:?}");
}

fn law_criterion(id: u32, title: &str, family: Family, min_exhaustive: usize, budget_secs: u64) {
    let _serial = serial();
    let start = Instant::now();
    let report = laws::run(family, &LawConfig::default());
    let elapsed = start.elapsed();
    let counts = format!("{} exhaustive, {} randomized", report.exhaustive, report.randomized);
    let detail = match &report.counterexample {
        Some(c) => format!("{counts}; {c}"),
        None => counts,
    };
    let ok = report.passed() && report.exhaustive >= min_exhaustive && report.randomized == family.default_cases();
    verdict(id, title, ok, elapsed, Duration::from_secs(budget_secs), &detail);
}

#[test]
fn criterion_01_drag_axioms() {
    // 6³ grid triples for the interval d-rag alone
    law_criterion(1, "d-rag axioms on 10,000 triples and the grid cross product", Family::DragAxioms, 216, 5);
}

#[test]
fn criterion_02_monad_laws() {
    law_criterion(2, "monad laws, exhaustive and 500 randomized", Family::MonadLaws, 1, 60);
}

#[test]
fn criterion_03_fubini() {
    law_criterion(3, "Fubini exchange on 500 triples", Family::Fubini, 0, 30);
}

#[test]
fn criterion_04_choquet() {
    law_criterion(4, "lower integral equals Choquet sum on 2,000 instances", Family::Choquet, 0, 10);
}

#[test]
fn criterion_05_integral_algebra() {
    law_criterion(5, "lower/upper integral algebra on 1,000 cases", Family::IntegralAlgebra, 0, 30);
}

#[test]
fn criterion_06_rval() {
    law_criterion(6, "rval linearity, monotonicity, soundness, Dirac", Family::Rval, 0, 30);
}

#[test]
fn criterion_07_view_from_left() {
    law_criterion(7, "view from the left and least extension", Family::ViewFromLeft, 0, 10);
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `Σᵢ 2⁻ⁿ [f_lo(i), f_hi(i)]` summed directly over plain rationals.
fn brute_force(n: u32, range: impl Fn(&BigRational, &BigRational) -> (BigRational, BigRational)) -> (BigRational, BigRational) {
    let cells = 1i64 << n;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for i in 0..cells {
        let (a, b) = (q(i, cells), q(i + 1, cells));
        let (m, s) = range(&a, &b);
        lo += m;
        hi += s;
    }
    (lo / BigRational::from_integer(cells.into()), hi / BigRational::from_integer(cells.into()))
}

fn tent(x: &BigRational) -> BigRational {
    let two = q(2, 1);
    let d = &two * x - BigRational::one();
    BigRational::one() - if d < BigRational::zero() { -d } else { d }
}

/// Independent enclosure of each fixture over `[a, b]`.
fn fixture_range(name: &str, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
    match name {
        "id" => (a.clone(), b.clone()),
        "square" => (a * a, b * b),
        "constant" => (q(3, 2), q(3, 2)),
        "tent" => {
            let (ta, tb) = (tent(a), tent(b));
            let low = ta.clone().min(tb.clone());
            let high = if a <= &q(1, 2) && &q(1, 2) <= b { BigRational::one() } else { ta.max(tb) };
            (low, high)
        }
        other => panic!("no oracle for {other}"),
    }
}

fn as_interval((lo, hi): (BigRational, BigRational)) -> IntervalValue {
    IntervalValue::new(ExtNonNeg::from(lo), ExtNonNeg::from(hi)).expect("ordered")
}

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n
}

fn identity_closed_form(n: u32) -> IntervalValue {
    let d = pow2(n + 1);
    as_interval((BigRational::new(pow2(n) - 1, d.clone()), BigRational::new(pow2(n) + 1, d)))
}

fn square_closed_form(n: u32) -> IntervalValue {
    let d = pow2(2 * n) * BigInt::from(6);
    let lo = BigRational::new((pow2(n) - 1) * (pow2(n + 1) - 1), d.clone());
    let hi = BigRational::new((pow2(n) + 1) * (pow2(n + 1) + 1), d);
    as_interval((lo, hi))
}

#[test]
fn criterion_08_lebesgue_chain_and_closed_forms() {
    let _serial = serial();
    let start = Instant::now();
    let engine = Lebesgue::new();
    let mut problems = Vec::new();
    for (name, _, _) in fixtures::PIECEWISE {
        let h = fixtures::extension(name).unwrap();
        if !engine.chain_check(&h, DEPTH).unwrap() {
            problems.push(format!("{name}: chain does not ascend"));
        }
        for n in 0..=DEPTH {
            let got = engine.lebesgue_n(n, &h).unwrap();
            let oracle = as_interval(brute_force(n, |a, b| fixture_range(name, a, b)));
            if got != oracle {
                problems.push(format!("{name}, n = {n}: {got} vs brute force {oracle}"));
            }
            let closed = match name {
                "id" => Some(identity_closed_form(n)),
                "square" => Some(square_closed_form(n)),
                _ => None,
            };
            if let Some(closed) = closed {
                if closed != oracle {
                    problems.push(format!("{name}, n = {n}: closed form {closed} vs brute force {oracle}"));
                }
            }
        }
    }
    verdict(
        8,
        "ℓₙ chain and exact values for n ≤ 12",
        problems.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        &problems.join("; "),
    );
}

#[test]
fn criterion_09_precise_limit_squeeze() {
    let _serial = serial();
    let start = Instant::now();
    let engine = Lebesgue::new();
    let tolerance = ExtNonNeg::from(q(1, 1 << DEPTH));
    let mut problems = Vec::new();
    for name in ["id", "square", "tent"] {
        let h = fixtures::extension(name).unwrap();
        let exact = ExtNonNeg::from(fixtures::integral(name).unwrap());
        for n in 0..=DEPTH {
            let v = engine.lebesgue_n(n, &h).unwrap();
            if !v.contains(&exact) {
                problems.push(format!("{name}, n = {n}: {exact} not in {v}"));
            }
            if n == DEPTH && v.width() > tolerance {
                problems.push(format!("{name}: width of ℓ₁₂ is {} > {tolerance}", v.width()));
            }
        }
    }
    verdict(
        9,
        "enclosures contain the exact integral and width(ℓ₁₂) ≤ 2⁻¹²",
        problems.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        &problems.join("; "),
    );
}

#[test]
fn criterion_10_infinity_branch() {
    let _serial = serial();
    let start = Instant::now();
    let engine = Lebesgue::new();
    let h = fixtures::unbounded_at_half();
    let mut problems = Vec::new();
    for n in 0..=DEPTH {
        let v = engine.lebesgue_n(n, &h).unwrap();
        let lower = brute_force(n, |a, b| (a.clone(), b.clone())).0;
        if !v.hi().is_infinite() {
            problems.push(format!("n = {n}: upper endpoint {} is finite", v.hi()));
        }
        if v.lo() != &ExtNonNeg::from(lower.clone()) {
            problems.push(format!("n = {n}: lower endpoint {} vs {lower}", v.lo()));
        }
    }
    verdict(
        10,
        "upper part infinite at 1/2 gives ℓₙ.hi = inf",
        problems.is_empty(),
        start.elapsed(),
        Duration::from_secs(30),
        &problems.join("; "),
    );
}

fn integrate_output(spec: &str, threads: u32, format: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_rvaluation"))
        .args(["integrate", "--fn", spec, "--eps", "1/4096", "--depth-cap", "14"])
        .args(["--threads", &threads.to_string(), "--format", format])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn criterion_11_cli_determinism() {
    let _serial = serial();
    let start = Instant::now();
    let mut problems = Vec::new();
    for (name, spec, _) in fixtures::PIECEWISE {
        for format in ["json", "csv"] {
            let reference = integrate_output(spec, 1, format);
            for threads in [1, 4, 8] {
                if integrate_output(spec, threads, format) != reference {
                    problems.push(format!("{name} ({format}) differs with --threads {threads}"));
                }
            }
        }
    }
    verdict(
        11,
        "integrate output byte-identical across runs and --threads 1/4/8",
        problems.is_empty(),
        start.elapsed(),
        Duration::from_secs(60),
        &problems.join("; "),
    );
}
