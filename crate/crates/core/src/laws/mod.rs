//! Executable law suites: d-rag axioms, monad laws, strength, Fubini,
//! integral identities and the dyadic Lebesgue chain.
//!
//! Randomized cases are reproducible from `(seed, family, case index)`. A
//! failing case is shrunk by retrying the same family at smaller sizes and
//! the smallest failure found is reported.

mod algebra;
pub mod gen;
mod integrals;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;

use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::error::Result;
use crate::monad::{bind, Kernel};
use crate::valuation::ElementaryValuation;
use gen::Rng8;

/// Attempts per size while shrinking a counterexample.
const SHRINK_ATTEMPTS: u64 = 200;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    DragAxioms,
    MonadLaws,
    Strength,
    Fubini,
    Choquet,
    IntegralAlgebra,
    Rval,
    ViewFromLeft,
    LebesgueChain,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::DragAxioms,
        Family::MonadLaws,
        Family::Strength,
        Family::Fubini,
        Family::Choquet,
        Family::IntegralAlgebra,
        Family::Rval,
        Family::ViewFromLeft,
        Family::LebesgueChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::DragAxioms => "d-rag axioms",
            Family::MonadLaws => "monad laws",
            Family::Strength => "strength identity",
            Family::Fubini => "Fubini exchange",
            Family::Choquet => "Choquet oracle",
            Family::IntegralAlgebra => "integral algebra",
            Family::Rval => "rval properties",
            Family::ViewFromLeft => "view from the left",
            Family::LebesgueChain => "Lebesgue chain",
        }
    }

    /// Short name used on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            Family::DragAxioms => "drag",
            Family::MonadLaws => "monad",
            Family::Strength => "strength",
            Family::Fubini => "fubini",
            Family::Choquet => "choquet",
            Family::IntegralAlgebra => "integrals",
            Family::Rval => "rval",
            Family::ViewFromLeft => "view",
            Family::LebesgueChain => "lebesgue",
        }
    }

    /// Randomized cases run when no count is given.
    pub fn default_cases(self) -> usize {
        match self {
            Family::DragAxioms => 10_000,
            Family::MonadLaws | Family::Strength | Family::Fubini => 500,
            Family::Choquet => 2_000,
            Family::IntegralAlgebra | Family::Rval => 1_000,
            Family::ViewFromLeft => 200,
            Family::LebesgueChain => 0,
        }
    }

    fn salt(self) -> u64 {
        Family::ALL.iter().position(|f| *f == self).expect("listed") as u64 + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.slug() == s)
            .ok_or_else(|| format!("unknown law family `{s}`"))
    }
}

/// Deliberate defects used to check that the suites catch real bugs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Fault {
    /// `bind` silently drops terms whose coefficient is the additive unit.
    BindDropsZeroTerms,
    /// Interval product computes the upper endpoint with `·ℓ`.
    MulRightAsLeft,
}

impl FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bind-drops-zero" => Ok(Fault::BindDropsZeroTerms),
            "mul-right-as-left" => Ok(Fault::MulRightAsLeft),
            other => Err(format!("unknown fault `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub seed: u64,
    /// Overrides every family's randomized case count.
    pub cases: Option<usize>,
    /// Depth for the Lebesgue chain family.
    pub lebesgue_depth: u32,
    pub fault: Option<Fault>,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            seed: 0,
            cases: None,
            lebesgue_depth: 12,
            fault: None,
        }
    }
}

/// A violated law with enough context to reproduce it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub law: String,
    /// Randomized case index, or `None` for an exhaustive check.
    pub case: Option<usize>,
    pub size: usize,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            Some(i) => write!(f, "{} (case {i}, size {}): {}", self.law, self.size, self.detail),
            None => write!(f, "{} (exhaustive): {}", self.law, self.detail),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub family: Family,
    pub exhaustive: usize,
    pub randomized: usize,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// One violated law inside a case.
#[derive(Clone, Debug)]
pub(crate) struct Violation {
    law: &'static str,
    detail: String,
}

pub(crate) type CaseResult = std::result::Result<(), Violation>;

pub(crate) fn check(ok: bool, law: &'static str, detail: impl FnOnce() -> String) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(Violation { law, detail: detail() })
    }
}

/// A library error inside a law is itself a violation.
pub(crate) fn lift<T>(r: Result<T>, law: &'static str) -> std::result::Result<T, Violation> {
    r.map_err(|e| Violation {
        law,
        detail: format!("unexpected error: {e}"),
    })
}

pub(crate) struct Ctx {
    pub fault: Option<Fault>,
}

impl Ctx {
    /// Interval product, possibly with the injected defect.
    pub fn imul(&self, a: &IntervalValue, b: &IntervalValue) -> IntervalValue {
        if self.fault == Some(Fault::MulRightAsLeft) {
            IntervalValue::new(a.lo().mul_left(b.lo()), a.hi().mul_left(b.hi())).unwrap_or_else(|_| a.mul(b))
        } else {
            a.mul(b)
        }
    }

    /// `bind`, possibly with the injected defect.
    pub fn bind<R: DRag>(&self, f: &Kernel<R>, nu: &ElementaryValuation<R>) -> Result<ElementaryValuation<R>> {
        let out = bind(f, nu)?;
        if self.fault != Some(Fault::BindDropsZeroTerms) {
            return Ok(out);
        }
        let kept: Vec<(R, usize)> = out.terms().iter().filter(|(r, _)| *r != R::zero()).cloned().collect();
        if kept.is_empty() {
            Ok(out)
        } else {
            ElementaryValuation::new(out.space().clone(), kept)
        }
    }
}

/// A randomized law: draws an instance of the given size and checks it.
pub(crate) type Case = fn(&Ctx, &mut Rng8, usize) -> CaseResult;

fn case_rng(seed: u64, family: Family, index: u64, size: usize, attempt: u64) -> Rng8 {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(family.salt() << 56)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add((size as u64) << 48)
        .wrapping_add(attempt.wrapping_mul(0x94D0_49BB_1331_11EB));
    Rng8::seed_from_u64(mix)
}

/// Runs `cases` randomized instances at `max_size`, shrinking the first
/// failure.
fn run_random(ctx: &Ctx, cfg: &LawConfig, family: Family, cases: usize, max_size: usize, case: Case) -> Option<Counterexample> {
    for i in 0..cases {
        let mut rng = case_rng(cfg.seed, family, i as u64, max_size, 0);
        if let Err(v) = case(ctx, &mut rng, max_size) {
            for size in 1..max_size {
                for attempt in 1..=SHRINK_ATTEMPTS {
                    let mut rng = case_rng(cfg.seed, family, i as u64, size, attempt);
                    if let Err(small) = case(ctx, &mut rng, size) {
                        return Some(Counterexample {
                            law: small.law.to_string(),
                            case: Some(i),
                            size,
                            detail: small.detail,
                        });
                    }
                }
            }
            return Some(Counterexample {
                law: v.law.to_string(),
                case: Some(i),
                size: max_size,
                detail: v.detail,
            });
        }
    }
    None
}

fn exhaustive_failure(v: Violation) -> Counterexample {
    Counterexample {
        law: v.law.to_string(),
        case: None,
        size: 0,
        detail: v.detail,
    }
}

/// Runs one family.
pub fn run(family: Family, cfg: &LawConfig) -> LawReport {
    let start = Instant::now();
    let ctx = Ctx { fault: cfg.fault };
    let cases = cfg.cases.unwrap_or_else(|| family.default_cases());
    let (exhaustive, randomized, counterexample) = match family {
        Family::DragAxioms => {
            let (n, r) = algebra::drag_exhaustive(&ctx);
            match r {
                Err(v) => (n, 0, Some(exhaustive_failure(v))),
                Ok(()) => (n, cases, run_random(&ctx, cfg, family, cases, 1, algebra::drag_case)),
            }
        }
        Family::MonadLaws => {
            let (n, r) = algebra::monad_exhaustive(&ctx);
            match r {
                Err(v) => (n, 0, Some(exhaustive_failure(v))),
                Ok(()) => (n, cases, run_random(&ctx, cfg, family, cases, 6, algebra::monad_case)),
            }
        }
        Family::Strength => (0, cases, run_random(&ctx, cfg, family, cases, 5, algebra::strength_case)),
        Family::Fubini => (0, cases, run_random(&ctx, cfg, family, cases, 4, algebra::fubini_case)),
        Family::Choquet => (0, cases, run_random(&ctx, cfg, family, cases, 6, integrals::choquet_case)),
        Family::IntegralAlgebra => (0, cases, run_random(&ctx, cfg, family, cases, 6, integrals::integral_case)),
        Family::Rval => (0, cases, run_random(&ctx, cfg, family, cases, 5, integrals::rval_case)),
        Family::ViewFromLeft => (0, cases, run_random(&ctx, cfg, family, cases, 5, integrals::view_case)),
        Family::LebesgueChain => {
            let (n, r) = integrals::lebesgue_chain(cfg.lebesgue_depth);
            (n, 0, r.err().map(exhaustive_failure))
        }
    };
    LawReport {
        family,
        exhaustive,
        randomized,
        counterexample,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(cfg: &LawConfig) -> Vec<LawReport> {
    Family::ALL.iter().map(|&f| run(f, cfg)).collect()
}

/// `[lo, hi]` membership for a scalar.
pub(crate) fn approximates(v: &IntervalValue, x: &ExtNonNeg) -> bool {
    v.lo() <= x && x <= v.hi()
}
