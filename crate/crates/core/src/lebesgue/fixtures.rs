//! Reference integrands on `[0,1]` with known integrals.

use num_rational::BigRational;
use num_traits::One;

use super::{canonical_extension, DyadicInterval, IntervalTestFn, PiecewiseMonotoneFn};
use crate::drag::{ExtNonNeg, IntervalValue};

/// `(name, piecewise literal, exact integral)` for the finite fixtures.
pub const PIECEWISE: [(&str, &str, &str); 4] = [
    ("id", "piecewise { [0,1] inc: x }", "1/2"),
    ("square", "piecewise { [0,1] inc: x^2 }", "1/3"),
    ("constant", "piecewise { [0,1] inc: 3/2 }", "3/2"),
    (
        "tent",
        "piecewise { [0,1/2] inc: 2*x; [1/2,3/4] dec: 2 - 2*x; [3/4,1] dec: 2 - 2*x }",
        "1/2",
    ),
];

/// The piecewise fixture with the given name.
pub fn piecewise(name: &str) -> Option<PiecewiseMonotoneFn> {
    PIECEWISE
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, src, _)| src.parse().expect("fixture literal parses"))
}

/// Exact integral of a named fixture.
pub fn integral(name: &str) -> Option<BigRational> {
    PIECEWISE
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, v)| crate::drag::parse_rational(v).expect("fixture value parses"))
}

/// Canonical extension of a named fixture.
pub fn extension(name: &str) -> Option<IntervalTestFn> {
    piecewise(name).map(|f| canonical_extension(&f).expect("fixture is evaluable"))
}

/// The identity extended with no upper information on intervals that
/// contain `1/2`: `I ↦ [inf I, inf]` there and `[inf I, sup I]` elsewhere.
pub fn unbounded_at_half() -> IntervalTestFn {
    let half = BigRational::new(1.into(), 2.into());
    IntervalTestFn::new(move |i: &DyadicInterval| {
        let lo = i.lo().clone().max(BigRational::from_integer(0.into()));
        let lo = ExtNonNeg::new(lo.min(BigRational::one()))?;
        if i.contains(&half) {
            Ok(IntervalValue::from_below(lo))
        } else {
            let hi = ExtNonNeg::new(i.hi().clone().min(BigRational::one()).max(BigRational::from_integer(0.into())))?;
            IntervalValue::new(lo, hi)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_and_evaluate() {
        for (name, _, _) in PIECEWISE {
            let h = extension(name).unwrap();
            h.validate_monotone(6).unwrap();
        }
        unbounded_at_half().validate_monotone(6).unwrap();
    }

    #[test]
    fn tent_peaks_at_half() {
        let h = extension("tent").unwrap();
        assert_eq!(h.eval(&DyadicInterval::grid(0, 0)).unwrap(), "[0,1]".parse().unwrap());
        assert_eq!(h.eval(&DyadicInterval::grid(2, 1)).unwrap(), "[1/2,1]".parse().unwrap());
    }
}
