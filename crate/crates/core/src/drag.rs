//! Exact arithmetic on the two shipped d-rags: the extended non-negative
//! rationals and the interval d-rag of closed intervals `[a, b]` with
//! `0 <= a <= b <= inf`, ordered by reverse inclusion.
//!
//! Every value is immutable and every operation is pure.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Algebraic interface shared by every d-rag the library ships.
///
/// `add` and `mul` must form an Abelian rag (no `0 * r = 0` law), and both
/// must be monotone in `leq`. `bottom` is the least element.
pub trait DRag: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn bottom() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn leq(&self, other: &Self) -> bool;

    /// A small set of representative values, including the units and the
    /// bottom, used to build exhaustive test families.
    fn sample_grid() -> Vec<Self>;

    fn sum<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }
}

/// A non-negative rational or `+inf`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtNonNeg {
    Finite(BigRational),
    Infinity,
}

impl ExtNonNeg {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::Negative(value.to_string()));
        }
        Ok(ExtNonNeg::Finite(value))
    }

    pub fn zero() -> Self {
        ExtNonNeg::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        ExtNonNeg::Finite(BigRational::one())
    }

    pub fn infinity() -> Self {
        ExtNonNeg::Infinity
    }

    /// Integer value. Panics on negative input.
    pub fn int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into())).expect("non-negative integer")
    }

    /// `num/den`. Panics on negative or zero-denominator input.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into())).expect("non-negative ratio")
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNonNeg::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNonNeg::Infinity)
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtNonNeg::Finite(r) => Some(r),
            ExtNonNeg::Infinity => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => ExtNonNeg::Finite(a + b),
            _ => ExtNonNeg::Infinity,
        }
    }

    /// Product with `0 * inf = 0`, the convention that keeps lower endpoints
    /// Scott-continuous.
    pub fn mul_left(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.mul_nonzero(other)
    }

    /// Product with `0 * inf = inf`, the convention that keeps upper endpoints
    /// Scott-cocontinuous.
    pub fn mul_right(&self, other: &Self) -> Self {
        if self.is_infinite() || other.is_infinite() {
            return ExtNonNeg::Infinity;
        }
        self.mul_nonzero(other)
    }

    fn mul_nonzero(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => ExtNonNeg::Finite(a * b),
            _ => ExtNonNeg::Infinity,
        }
    }

    /// Truncated subtraction `max(self - other, 0)`; `inf - inf` is `0`.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => {
                if a > b {
                    ExtNonNeg::Finite(a - b)
                } else {
                    Self::zero()
                }
            }
            (ExtNonNeg::Infinity, ExtNonNeg::Finite(_)) => ExtNonNeg::Infinity,
            (_, ExtNonNeg::Infinity) => Self::zero(),
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for ExtNonNeg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNonNeg {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNonNeg::Finite(a), ExtNonNeg::Finite(b)) => a.cmp(b),
            (ExtNonNeg::Finite(_), ExtNonNeg::Infinity) => Ordering::Less,
            (ExtNonNeg::Infinity, ExtNonNeg::Finite(_)) => Ordering::Greater,
            (ExtNonNeg::Infinity, ExtNonNeg::Infinity) => Ordering::Equal,
        }
    }
}

impl From<BigRational> for ExtNonNeg {
    /// Panics if `r` is negative; use [`ExtNonNeg::new`] for checked input.
    fn from(r: BigRational) -> Self {
        ExtNonNeg::new(r).expect("non-negative rational")
    }
}

impl fmt::Display for ExtNonNeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNonNeg::Finite(r) => write!(f, "{}", r),
            ExtNonNeg::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNonNeg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "+inf" || s == "∞" {
            return Ok(ExtNonNeg::Infinity);
        }
        ExtNonNeg::new(parse_rational(s)?)
    }
}

/// Parses `p`, `p/q` or `-p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |msg: &str| Error::Parse {
        line: 1,
        column: 1,
        message: format!("{msg}: `{s}`"),
    };
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let digits = |t: &str| {
        let body = t.strip_prefix(['+', '-']).unwrap_or(t);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num) || !digits(den) || den.starts_with('-') {
        return Err(bad("not a rational"));
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad("not a rational"))?;
    let d: BigInt = den.trim_start_matches('+').parse().map_err(|_| bad("not a rational"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl DRag for ExtNonNeg {
    fn zero() -> Self {
        ExtNonNeg::zero()
    }
    fn one() -> Self {
        ExtNonNeg::one()
    }
    fn bottom() -> Self {
        ExtNonNeg::zero()
    }
    fn add(&self, other: &Self) -> Self {
        ExtNonNeg::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_left(other)
    }
    fn leq(&self, other: &Self) -> bool {
        self <= other
    }
    fn sample_grid() -> Vec<Self> {
        vec![
            ExtNonNeg::zero(),
            ExtNonNeg::ratio(1, 2),
            ExtNonNeg::one(),
            ExtNonNeg::int(2),
            ExtNonNeg::Infinity,
        ]
    }
}

/// A closed interval `[lo, hi]` of extended non-negative rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntervalValue {
    lo: ExtNonNeg,
    hi: ExtNonNeg,
}

impl IntervalValue {
    pub fn new(lo: ExtNonNeg, hi: ExtNonNeg) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(IntervalValue { lo, hi })
    }

    pub fn point(x: ExtNonNeg) -> Self {
        IntervalValue { lo: x.clone(), hi: x }
    }

    /// `[lo_num/lo_den, hi_num/hi_den]`; panics if the interval is malformed.
    pub fn ratio(lo: (i64, i64), hi: (i64, i64)) -> Self {
        Self::new(ExtNonNeg::ratio(lo.0, lo.1), ExtNonNeg::ratio(hi.0, hi.1)).expect("well-formed interval")
    }

    /// `[lo, inf]`.
    pub fn from_below(lo: ExtNonNeg) -> Self {
        IntervalValue {
            lo,
            hi: ExtNonNeg::Infinity,
        }
    }

    pub fn zero() -> Self {
        Self::point(ExtNonNeg::zero())
    }

    pub fn one() -> Self {
        Self::point(ExtNonNeg::one())
    }

    pub fn bottom() -> Self {
        Self::from_below(ExtNonNeg::zero())
    }

    pub fn lo(&self) -> &ExtNonNeg {
        &self.lo
    }

    pub fn hi(&self) -> &ExtNonNeg {
        &self.hi
    }

    pub fn into_parts(self) -> (ExtNonNeg, ExtNonNeg) {
        (self.lo, self.hi)
    }

    pub fn add(&self, other: &Self) -> Self {
        IntervalValue {
            lo: self.lo.add(&other.lo),
            hi: self.hi.add(&other.hi),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        IntervalValue {
            lo: self.lo.mul_left(&other.lo),
            hi: self.hi.mul_right(&other.hi),
        }
    }

    /// Reverse inclusion: `self` is less informative than `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains(&self, x: &ExtNonNeg) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `hi - lo`, with `[inf, inf]` of width zero.
    pub fn width(&self) -> ExtNonNeg {
        self.hi.saturating_sub(&self.lo)
    }

    pub fn is_precise(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl FromStr for IntervalValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected `[lo,hi]`, found `{s}`"),
            })?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected `[lo,hi]`, found `{s}`"),
        })?;
        IntervalValue::new(lo.parse()?, hi.parse()?)
    }
}

impl DRag for IntervalValue {
    fn zero() -> Self {
        IntervalValue::zero()
    }
    fn one() -> Self {
        IntervalValue::one()
    }
    fn bottom() -> Self {
        IntervalValue::bottom()
    }
    fn add(&self, other: &Self) -> Self {
        IntervalValue::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        IntervalValue::mul(self, other)
    }
    fn leq(&self, other: &Self) -> bool {
        IntervalValue::leq(self, other)
    }
    fn sample_grid() -> Vec<Self> {
        ["[0,0]", "[1,1]", "[1/2,1/2]", "[1,2]", "[0,inf]", "[2,3]", "[inf,inf]"]
            .iter()
            .map(|s| s.parse().expect("grid literal"))
            .collect()
    }
}

/// Supremum of a finite ascending chain: `[max lo, min hi]`, which is its
/// last element. Rejects sequences that are not ascending.
pub fn chain_sup(xs: &[IntervalValue]) -> Result<IntervalValue> {
    let first = xs.first().ok_or(Error::EmptyChain)?;
    for (i, pair) in xs.windows(2).enumerate() {
        if !pair[0].leq(&pair[1]) {
            return Err(Error::NotAChain { index: i + 1 });
        }
    }
    let lo = xs.iter().map(|x| x.lo.clone()).fold(first.lo.clone(), ExtNonNeg::max);
    let hi = xs.iter().map(|x| x.hi.clone()).fold(first.hi.clone(), ExtNonNeg::min);
    IntervalValue::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ExtNonNeg {
        s.parse().unwrap()
    }

    fn iv(s: &str) -> IntervalValue {
        s.parse().unwrap()
    }

    #[test]
    fn extended_addition() {
        assert_eq!(e("1/2").add(&e("1/3")), e("5/6"));
        assert_eq!(e("0").add(&e("0")), e("0"));
        assert_eq!(e("7").add(&e("inf")), e("inf"));
    }

    #[test]
    fn left_and_right_products() {
        assert_eq!(e("0").mul_left(&e("inf")), e("0"));
        assert_eq!(e("inf").mul_left(&e("0")), e("0"));
        assert_eq!(e("2").mul_left(&e("3")), e("6"));
        assert_eq!(e("inf").mul_left(&e("5")), e("inf"));

        assert_eq!(e("0").mul_right(&e("inf")), e("inf"));
        assert_eq!(e("inf").mul_right(&e("0")), e("inf"));
        assert_eq!(e("0").mul_right(&e("4")), e("0"));
        assert_eq!(e("inf").mul_right(&e("inf")), e("inf"));
    }

    #[test]
    fn interval_sum() {
        assert_eq!(iv("[1,2]").add(&iv("[3,5]")), iv("[4,7]"));
        assert_eq!(IntervalValue::bottom().add(&iv("[2/3,5]")), iv("[2/3,inf]"));
        assert_eq!(IntervalValue::zero().add(&iv("[1/7,9]")), iv("[1/7,9]"));
    }

    #[test]
    fn interval_product() {
        assert_eq!(IntervalValue::bottom().mul(&iv("[3,4]")), IntervalValue::bottom());
        assert_eq!(IntervalValue::bottom().mul(&iv("[0,0]")), IntervalValue::bottom());
        assert_eq!(IntervalValue::one().mul(&iv("[1/2,7]")), iv("[1/2,7]"));
        assert_eq!(iv("[0,0]").mul(&iv("[inf,inf]")), iv("[0,inf]"));
    }

    #[test]
    fn reverse_inclusion() {
        assert!(iv("[1,3]").leq(&iv("[2,5/2]")));
        assert!(IntervalValue::bottom().leq(&iv("[4,4]")));
        assert!(!iv("[1,2]").leq(&iv("[3,4]")));
    }

    #[test]
    fn chain_supremum() {
        let chain = [iv("[0,1]"), iv("[1/4,3/4]"), iv("[1/2,1/2]")];
        assert_eq!(chain_sup(&chain).unwrap(), iv("[1/2,1/2]"));
        assert_eq!(chain_sup(&[iv("[2,3]")]).unwrap(), iv("[2,3]"));
        let bot = IntervalValue::bottom();
        assert_eq!(chain_sup(&[bot.clone(), bot.clone()]).unwrap(), bot);
        assert_eq!(chain_sup(&[iv("[1,2]"), iv("[3,4]")]), Err(Error::NotAChain { index: 1 }));
        assert_eq!(chain_sup(&[]), Err(Error::EmptyChain));
    }

    #[test]
    fn rendering() {
        assert_eq!(iv("[2/4,inf]").to_string(), "[1/2,inf]");
        assert_eq!(e("6/3").to_string(), "2");
        assert!("[3,1]".parse::<IntervalValue>().is_err());
        assert!("-1".parse::<ExtNonNeg>().is_err());
        assert!("1/0".parse::<ExtNonNeg>().is_err());
    }

    #[test]
    fn width_conventions() {
        assert_eq!(iv("[1/4,3/4]").width(), e("1/2"));
        assert_eq!(iv("[1,inf]").width(), e("inf"));
        assert_eq!(iv("[inf,inf]").width(), e("0"));
    }
}
