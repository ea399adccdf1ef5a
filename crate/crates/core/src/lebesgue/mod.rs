//! Lebesgue measure on `[0,1]` seen from the interval domain.
//!
//! `ℓₙ = Σᵢ 2⁻ⁿ δ_{[(i−1)/2ⁿ, i/2ⁿ]}` is a simple interval-valued valuation on
//! closed intervals. The `ℓₙ` form an ascending chain whose supremum is the
//! Lebesgue valuation `ℓ`. Only the enclosures `ℓₙ(h) ⊑ ℓ(h)` are computed.

pub mod fixtures;
mod piecewise;
mod poly;

pub use piecewise::{Direction, Piece, PiecewiseMonotoneFn};
pub use poly::Polynomial;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::drag::{ExtNonNeg, IntervalValue};
use crate::error::{Error, Result};
use piecewise::RangeOracle;

pub const DEFAULT_DEPTH_CAP: u32 = 24;
pub const MAX_DEPTH_CAP: u32 = 30;
/// Entries kept in a test function's memo table before it stops growing.
pub const DEFAULT_MEMO_CAP: usize = 1 << 16;

fn pow2(n: u32) -> BigInt {
    BigInt::one() << n
}

fn is_dyadic(q: &BigRational) -> bool {
    let d = q.denom();
    d.trailing_zeros().is_none_or(|tz| *d == BigInt::one() << tz)
}

/// A closed interval with dyadic rational endpoints, ordered by reverse
/// inclusion.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicInterval {
    lo: BigRational,
    hi: BigRational,
}

impl DyadicInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        for v in [&lo, &hi] {
            if !is_dyadic(v) {
                return Err(Error::NotDyadic(v.to_string()));
            }
        }
        if lo > hi {
            return Err(Error::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(DyadicInterval { lo, hi })
    }

    pub fn point(x: BigRational) -> Result<Self> {
        Self::new(x.clone(), x)
    }

    /// `[i/2ⁿ, (i+1)/2ⁿ]`.
    pub fn grid(n: u32, i: u64) -> Self {
        let d = pow2(n);
        DyadicInterval {
            lo: BigRational::new(BigInt::from(i), d.clone()),
            hi: BigRational::new(BigInt::from(i) + 1, d),
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// `self ⊑ other`, i.e. `other ⊆ self`.
    pub fn leq(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// The two halves at the midpoint.
    pub fn halves(&self) -> (Self, Self) {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        (
            DyadicInterval {
                lo: self.lo.clone(),
                hi: mid.clone(),
            },
            DyadicInterval {
                lo: mid,
                hi: self.hi.clone(),
            },
        )
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

type Evaluator = dyn Fn(&DyadicInterval) -> Result<IntervalValue> + Send + Sync;

struct TestFnInner {
    eval: Box<Evaluator>,
    memo: RwLock<HashMap<DyadicInterval, IntervalValue>>,
    memo_cap: usize,
}

/// An interval-valued test function on dyadic intervals. Values are cached;
/// the evaluator must be pure.
#[derive(Clone)]
pub struct IntervalTestFn {
    inner: Arc<TestFnInner>,
}

impl fmt::Debug for IntervalTestFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalTestFn").field("memo_len", &self.memo_len()).finish()
    }
}

impl IntervalTestFn {
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(&DyadicInterval) -> Result<IntervalValue> + Send + Sync + 'static,
    {
        Self::with_memo_cap(eval, DEFAULT_MEMO_CAP)
    }

    pub fn with_memo_cap<F>(eval: F, memo_cap: usize) -> Self
    where
        F: Fn(&DyadicInterval) -> Result<IntervalValue> + Send + Sync + 'static,
    {
        IntervalTestFn {
            inner: Arc::new(TestFnInner {
                eval: Box::new(eval),
                memo: RwLock::new(HashMap::new()),
                memo_cap,
            }),
        }
    }

    pub fn eval(&self, interval: &DyadicInterval) -> Result<IntervalValue> {
        if let Some(v) = self.inner.memo.read().expect("memo lock").get(interval) {
            return Ok(v.clone());
        }
        let v = (self.inner.eval)(interval)?;
        let mut memo = self.inner.memo.write().expect("memo lock");
        if memo.len() < self.inner.memo_cap {
            memo.entry(interval.clone()).or_insert_with(|| v.clone());
        }
        Ok(v)
    }

    /// `h⁻(I)`.
    pub fn lower(&self, interval: &DyadicInterval) -> Result<ExtNonNeg> {
        Ok(self.eval(interval)?.lo().clone())
    }

    /// `h⁺(I)`.
    pub fn upper(&self, interval: &DyadicInterval) -> Result<ExtNonNeg> {
        Ok(self.eval(interval)?.hi().clone())
    }

    pub fn memo_len(&self) -> usize {
        self.inner.memo.read().expect("memo lock").len()
    }

    /// Checks `h(I) ⊑ h(J)` for every dyadic grid interval `I` of depth below
    /// `depth` and each half `J` of it.
    pub fn validate_monotone(&self, depth: u32) -> Result<()> {
        for n in 0..depth {
            for i in 0..(1u64 << n) {
                let parent = DyadicInterval::grid(n, i);
                let outer = self.eval(&parent)?;
                let (a, b) = parent.halves();
                for child in [a, b] {
                    if !outer.leq(&self.eval(&child)?) {
                        return Err(Error::NotMonotone(format!("h{parent} is not below h{child}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `I ↦ [inf f(I ∩ [0,1]), sup f(I ∩ [0,1])]`.
pub fn canonical_extension(f: &PiecewiseMonotoneFn) -> Result<IntervalTestFn> {
    let oracle = RangeOracle::new(f)?;
    Ok(IntervalTestFn::new(move |i| {
        let (lo, hi) = oracle.range(i.lo(), i.hi())?;
        IntervalValue::new(ExtNonNeg::new(lo)?, ExtNonNeg::new(hi)?)
    }))
}

/// `[jₙ⁻(x), jₙ⁺(x)]`: `jₙ⁻(x)` is the largest multiple of `2⁻ⁿ` strictly
/// below `x` (0 when `x ≤ 2⁻ⁿ`) and `jₙ⁺(x) = 1 − jₙ⁻(1 − x)`.
pub fn dyadic_round(n: u32, x: &BigRational) -> Result<DyadicInterval> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(Error::OutOfRange(x.to_string()));
    }
    let scale = BigRational::from_integer(pow2(n));
    let down = |y: &BigRational| -> BigRational {
        // i with y ∈ (i/2ⁿ, (i+1)/2ⁿ], floored at 0
        let i = (y * &scale).ceil() - BigRational::one();
        if i.is_negative() {
            BigRational::zero()
        } else {
            i / &scale
        }
    };
    let lo = down(x);
    let hi = BigRational::one() - down(&(BigRational::one() - x));
    DyadicInterval::new(lo, hi)
}

/// Per-depth enclosures from a refinement run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Refinement {
    /// `rows[n] = ℓₙ(h)`.
    pub rows: Vec<IntervalValue>,
    pub converged: bool,
}

impl Refinement {
    pub fn depth(&self) -> u32 {
        self.rows.len().saturating_sub(1) as u32
    }

    pub fn last(&self) -> &IntervalValue {
        self.rows.last().expect("refinement has at least one row")
    }
}

/// Evaluates `ℓₙ` with a depth cap and optional worker pool.
#[derive(Clone)]
pub struct Lebesgue {
    depth_cap: u32,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl fmt::Debug for Lebesgue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lebesgue")
            .field("depth_cap", &self.depth_cap)
            .field("threads", &self.pool.as_ref().map(|p| p.current_num_threads()))
            .finish()
    }
}

impl Default for Lebesgue {
    fn default() -> Self {
        Lebesgue {
            depth_cap: DEFAULT_DEPTH_CAP,
            pool: None,
        }
    }
}

impl Lebesgue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_depth_cap(mut self, cap: u32) -> Result<Self> {
        if cap > MAX_DEPTH_CAP {
            return Err(Error::DepthCapExceeded {
                requested: cap,
                cap: MAX_DEPTH_CAP,
                best: None,
            });
        }
        self.depth_cap = cap;
        Ok(self)
    }

    /// Spreads grid evaluation over `threads` workers. One thread means
    /// sequential evaluation. Results do not depend on the thread count.
    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        self.pool = if threads <= 1 {
            None
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))?;
            Some(Arc::new(pool))
        };
        Ok(self)
    }

    pub fn depth_cap(&self) -> u32 {
        self.depth_cap
    }

    fn check_depth(&self, n: u32) -> Result<()> {
        if n > self.depth_cap {
            return Err(Error::DepthCapExceeded {
                requested: n,
                cap: self.depth_cap,
                best: None,
            });
        }
        Ok(())
    }

    /// `h` on the depth-`n` grid, in order.
    fn grid_values(&self, n: u32, h: &IntervalTestFn) -> Result<Vec<IntervalValue>> {
        let count = 1u64 << n;
        match &self.pool {
            Some(pool) => pool.install(|| {
                (0..count)
                    .into_par_iter()
                    .map(|i| h.eval(&DyadicInterval::grid(n, i)))
                    .collect()
            }),
            None => (0..count).map(|i| h.eval(&DyadicInterval::grid(n, i))).collect(),
        }
    }

    /// `ℓₙ(h) = Σᵢ [2⁻ⁿ, 2⁻ⁿ] × h(Iᵢ)` in interval arithmetic.
    pub fn lebesgue_n(&self, n: u32, h: &IntervalTestFn) -> Result<IntervalValue> {
        self.check_depth(n)?;
        let weight = IntervalValue::point(ExtNonNeg::from(BigRational::new(BigInt::one(), pow2(n))));
        Ok(self
            .grid_values(n, h)?
            .iter()
            .fold(IntervalValue::zero(), |acc, v| acc.add(&weight.mul(v))))
    }

    /// `[Σᵢ h⁻(Iᵢ)/2ⁿ, Σᵢ h⁺(Iᵢ)/2ⁿ]`, summing endpoints separately.
    pub fn lebesgue_n_endpoints(&self, n: u32, h: &IntervalTestFn) -> Result<IntervalValue> {
        self.check_depth(n)?;
        let values = self.grid_values(n, h)?;
        let scale = BigRational::from_integer(pow2(n));
        let average = |endpoint: fn(&IntervalValue) -> &ExtNonNeg| -> ExtNonNeg {
            let mut total = BigRational::zero();
            for v in &values {
                match endpoint(v).as_finite() {
                    Some(x) => total += x,
                    None => return ExtNonNeg::Infinity,
                }
            }
            ExtNonNeg::from(total / &scale)
        };
        IntervalValue::new(average(IntervalValue::lo), average(IntervalValue::hi))
    }

    /// Enclosures for `n = 0, 1, …` until the width is at most `eps` or the
    /// cap is reached.
    pub fn refine(&self, h: &IntervalTestFn, eps: &BigRational) -> Result<Refinement> {
        if !eps.is_positive() {
            return Err(Error::NonPositiveTolerance);
        }
        let eps = ExtNonNeg::from(eps.clone());
        let mut rows = Vec::new();
        for n in 0..=self.depth_cap {
            let v = self.lebesgue_n(n, h)?;
            let done = v.width() <= eps;
            rows.push(v);
            if done {
                return Ok(Refinement { rows, converged: true });
            }
        }
        Ok(Refinement { rows, converged: false })
    }

    /// The first `ℓₙ(h)` of width at most `eps`, with its depth.
    pub fn integrate(&self, h: &IntervalTestFn, eps: &BigRational) -> Result<(IntervalValue, u32)> {
        let run = self.refine(h, eps)?;
        let depth = run.depth();
        if run.converged {
            Ok((run.last().clone(), depth))
        } else {
            Err(Error::DepthCapExceeded {
                requested: depth + 1,
                cap: self.depth_cap,
                best: Some((run.last().clone(), depth)),
            })
        }
    }

    /// Whether `ℓₙ(h) ⊑ ℓₙ₊₁(h)` for all `n < n_max`.
    pub fn chain_check(&self, h: &IntervalTestFn, n_max: u32) -> Result<bool> {
        self.check_depth(n_max)?;
        let mut previous = self.lebesgue_n(0, h)?;
        for n in 1..=n_max {
            let next = self.lebesgue_n(n, h)?;
            if !previous.leq(&next) {
                return Ok(false);
            }
            previous = next;
        }
        Ok(true)
    }
}

/// `ℓₙ(h)` with the default depth cap.
pub fn lebesgue_n(n: u32, h: &IntervalTestFn) -> Result<IntervalValue> {
    Lebesgue::new().lebesgue_n(n, h)
}

/// First enclosure of width at most `eps`, with the default depth cap.
pub fn lebesgue_integrate(h: &IntervalTestFn, eps: &BigRational) -> Result<(IntervalValue, u32)> {
    Lebesgue::new().integrate(h, eps)
}

pub fn chain_check(h: &IntervalTestFn, n_max: u32) -> Result<bool> {
    Lebesgue::new().chain_check(h, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn iv(s: &str) -> IntervalValue {
        s.parse().unwrap()
    }

    fn ext_id() -> IntervalTestFn {
        canonical_extension(&PiecewiseMonotoneFn::identity()).unwrap()
    }

    fn ext_square() -> IntervalTestFn {
        let sq = Polynomial::x().pow(2);
        canonical_extension(&PiecewiseMonotoneFn::single(Direction::Increasing, sq).unwrap()).unwrap()
    }

    #[test]
    fn dyadic_intervals() {
        assert!(matches!(DyadicInterval::new(q(1, 3), q(1, 2)), Err(Error::NotDyadic(_))));
        assert!(matches!(DyadicInterval::new(q(1, 2), q(1, 4)), Err(Error::InvertedInterval { .. })));
        let i = DyadicInterval::grid(2, 1);
        assert_eq!(i.to_string(), "[1/4,1/2]");
        assert!(DyadicInterval::grid(1, 0).leq(&i));
        assert!(!i.leq(&DyadicInterval::grid(1, 0)));
    }

    #[test]
    fn canonical_extension_examples() {
        assert_eq!(ext_id().eval(&DyadicInterval::grid(2, 1)).unwrap(), iv("[1/4,1/2]"));
        let c = canonical_extension(&PiecewiseMonotoneFn::constant(q(3, 7)).unwrap()).unwrap();
        assert_eq!(c.eval(&DyadicInterval::grid(3, 5)).unwrap(), iv("[3/7,3/7]"));
        assert_eq!(ext_square().eval(&DyadicInterval::grid(2, 1)).unwrap(), iv("[1/16,1/4]"));
        let wide = DyadicInterval::new(q(-1, 1), q(2, 1)).unwrap();
        assert_eq!(ext_id().eval(&wide).unwrap(), iv("[0,1]"));
    }

    #[test]
    fn lebesgue_n_examples() {
        assert_eq!(lebesgue_n(1, &ext_id()).unwrap(), iv("[1/4,3/4]"));
        assert_eq!(lebesgue_n(2, &ext_id()).unwrap(), iv("[3/8,5/8]"));
        let c = canonical_extension(&PiecewiseMonotoneFn::constant(q(5, 3)).unwrap()).unwrap();
        for n in 0..5 {
            assert_eq!(lebesgue_n(n, &c).unwrap(), iv("[5/3,5/3]"));
        }
        assert!(matches!(lebesgue_n(25, &ext_id()), Err(Error::DepthCapExceeded { requested: 25, cap: 24, .. })));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(lebesgue_integrate(&ext_id(), &q(1, 8)).unwrap(), (iv("[7/16,9/16]"), 3));
        // ℓ₀ already has width 1
        assert_eq!(lebesgue_integrate(&ext_square(), &q(1, 1)).unwrap(), (iv("[0,1]"), 0));
        assert_eq!(lebesgue_integrate(&ext_square(), &q(1, 2)).unwrap(), (iv("[1/8,5/8]"), 1));
        let zero = canonical_extension(&PiecewiseMonotoneFn::constant(q(0, 1)).unwrap()).unwrap();
        assert_eq!(lebesgue_integrate(&zero, &q(1, 1000)).unwrap(), (iv("[0,0]"), 0));
        assert_eq!(lebesgue_integrate(&zero, &q(0, 1)), Err(Error::NonPositiveTolerance));

        let capped = Lebesgue::new().with_depth_cap(2).unwrap();
        match capped.integrate(&ext_id(), &q(1, 8)) {
            Err(Error::DepthCapExceeded { cap: 2, best: Some((v, 2)), .. }) => assert_eq!(v, iv("[3/8,5/8]")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn chain_check_examples() {
        assert!(chain_check(&ext_id(), 10).unwrap());
        assert!(chain_check(&ext_square(), 10).unwrap());
        // a non-monotone evaluator can break the chain
        let bad = IntervalTestFn::new(|i: &DyadicInterval| Ok(IntervalValue::point(ExtNonNeg::from(i.width()))));
        assert!(!chain_check(&bad, 3).unwrap());
    }

    #[test]
    fn dyadic_round_examples() {
        assert_eq!(dyadic_round(1, &q(1, 2)).unwrap(), DyadicInterval::new(q(0, 1), q(1, 1)).unwrap());
        assert_eq!(dyadic_round(2, &q(1, 1)).unwrap(), DyadicInterval::new(q(3, 4), q(1, 1)).unwrap());
        for n in 0..6 {
            let expected = DyadicInterval::new(q(0, 1), BigRational::new(BigInt::one(), pow2(n))).unwrap();
            assert_eq!(dyadic_round(n, &q(0, 1)).unwrap(), expected);
        }
        assert!(matches!(dyadic_round(3, &q(3, 2)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn endpoint_path_agrees() {
        for n in 0..8 {
            for h in [ext_id(), ext_square()] {
                assert_eq!(
                    Lebesgue::new().lebesgue_n(n, &h).unwrap(),
                    Lebesgue::new().lebesgue_n_endpoints(n, &h).unwrap()
                );
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let serial = Lebesgue::new();
        let parallel = Lebesgue::new().with_threads(4).unwrap();
        for n in [0, 3, 9] {
            assert_eq!(serial.lebesgue_n(n, &ext_square()).unwrap(), parallel.lebesgue_n(n, &ext_square()).unwrap());
        }
    }

    #[test]
    fn memo_respects_cap() {
        let h = IntervalTestFn::with_memo_cap(|i: &DyadicInterval| Ok(IntervalValue::point(ExtNonNeg::from(i.lo().clone()))), 5);
        Lebesgue::new().lebesgue_n(4, &h).unwrap();
        assert_eq!(h.memo_len(), 5);
    }

    #[test]
    fn monotonicity_validation() {
        ext_square().validate_monotone(6).unwrap();
        let bad = IntervalTestFn::new(|i: &DyadicInterval| Ok(IntervalValue::point(ExtNonNeg::from(i.width()))));
        assert!(matches!(bad.validate_monotone(2), Err(Error::NotMonotone(_))));
    }
}
