//! Elementary R-valuations `Σ r_i × δ_{x_i}` (with at least one term) over a
//! finite poset.

use std::fmt;

use crate::drag::{DRag, IntervalValue};
use crate::error::{Error, Result};
use crate::spaces::{FinitePoset, MonotoneMap};

/// A finite weighted sum of Dirac masses, kept in normal form: terms sorted
/// by point index, coefficients at the same point merged with `+`.
///
/// Zero coefficients are kept. In the interval d-rag `[0,0] × x` need not be
/// `[0,0]`, so dropping such a term would change the functional.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryValuation<R> {
    space: FinitePoset,
    terms: Vec<(R, usize)>,
}

impl<R: DRag> ElementaryValuation<R> {
    pub fn new(space: FinitePoset, terms: Vec<(R, usize)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::NoTerms);
        }
        for (_, x) in &terms {
            space.check_point(*x)?;
        }
        Ok(Self::normalized(space, terms))
    }

    /// Terms given by point name.
    pub fn from_named<S: AsRef<str>>(space: FinitePoset, terms: Vec<(R, S)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(r, name)| Ok((r, space.index_of(name.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, terms)
    }

    pub(crate) fn normalized(space: FinitePoset, mut terms: Vec<(R, usize)>) -> Self {
        debug_assert!(!terms.is_empty());
        terms.sort_by_key(|(_, x)| *x);
        let mut merged: Vec<(R, usize)> = Vec::with_capacity(terms.len());
        for (r, x) in terms {
            match merged.last_mut() {
                Some((acc, y)) if *y == x => *acc = acc.add(&r),
                _ => merged.push((r, x)),
            }
        }
        ElementaryValuation { space, terms: merged }
    }

    /// The Dirac mass `δ_x`: `h ↦ h(x)`.
    pub fn dirac(space: FinitePoset, x: usize) -> Result<Self> {
        space.check_point(x)?;
        Ok(ElementaryValuation {
            space,
            terms: vec![(R::one(), x)],
        })
    }

    /// `⊥ × δ_x`, the least valuation when `⊥` is multiplicatively absorbing.
    pub fn bottom(space: FinitePoset, x: usize) -> Result<Self> {
        space.check_point(x)?;
        Ok(ElementaryValuation {
            space,
            terms: vec![(R::bottom(), x)],
        })
    }

    pub fn space(&self) -> &FinitePoset {
        &self.space
    }

    pub fn terms(&self) -> &[(R, usize)] {
        &self.terms
    }

    /// `Σ r_i × h(x_i)`.
    pub fn evaluate(&self, h: &MonotoneMap<R>) -> Result<R> {
        self.space.ensure_same(h.domain())?;
        Ok(self.evaluate_with(|x| h.at(x).clone()))
    }

    /// Evaluates against an arbitrary point function. The caller is
    /// responsible for it being monotone when the result is read as a
    /// valuation applied to a test function.
    pub fn evaluate_with(&self, h: impl Fn(usize) -> R) -> R {
        self.terms
            .iter()
            .fold(R::zero(), |acc, (r, x)| acc.add(&r.mul(&h(*x))))
    }

    /// `a × ν`, coefficientwise.
    pub fn scale(&self, a: &R) -> Self {
        ElementaryValuation {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(r, x)| (a.mul(r), *x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(Self::normalized(self.space.clone(), terms))
    }

    /// `Σ r_i`: the value at the constant-one test function.
    pub fn total(&self) -> R {
        R::sum(self.terms.iter().map(|(r, _)| r))
    }

    /// `ν(h) ⊑ ν'(h)` for every supplied test. Sound relative to the family,
    /// not a decision procedure for the full pointwise order.
    pub fn leq_on(&self, other: &Self, tests: &[MonotoneMap<R>]) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        for h in tests {
            if !self.evaluate(h)?.leq(&other.evaluate(h)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Functional equality relative to a test family.
    pub fn eq_on(&self, other: &Self, tests: &[MonotoneMap<R>]) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        for h in tests {
            if self.evaluate(h)? != other.evaluate(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First test on which the two valuations disagree, if any.
    pub fn first_difference<'a>(&self, other: &Self, tests: &'a [MonotoneMap<R>]) -> Result<Option<&'a MonotoneMap<R>>> {
        self.space.ensure_same(&other.space)?;
        for h in tests {
            if self.evaluate(h)? != other.evaluate(h)? {
                return Ok(Some(h));
            }
        }
        Ok(None)
    }
}

/// Monotone maps from `space` into `grid`; the exhaustive test family used to
/// compare valuations on small posets.
pub fn exhaustive_tests<R: DRag>(space: &FinitePoset, grid: &[R]) -> Vec<MonotoneMap<R>> {
    space.monotone_maps(grid)
}

/// Default grid for exhaustive comparisons of interval-valued valuations.
pub fn interval_test_grid() -> Vec<IntervalValue> {
    IntervalValue::sample_grid()
}

impl<R: DRag> fmt::Display for ElementaryValuation<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("val {")?;
        let mut sep = " ";
        for (r, x) in &self.terms {
            write!(f, "{sep}{r} @ {}", self.space.name(*x))?;
            sep = "; ";
        }
        f.write_str(" }")
    }
}
