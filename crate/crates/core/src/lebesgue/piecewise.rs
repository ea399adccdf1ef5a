//! Piecewise polynomial functions on `[0,1]` with declared monotonicity per
//! piece, and their exact inf/sup over closed intervals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Number of subintervals used to spot-check a declared direction.
const SPOT_CHECK_STEPS: u32 = 256;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Direction {
    Increasing,
    Decreasing,
    /// No declared direction: extrema are located through the rational
    /// critical points of the piece.
    Any,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Increasing => "inc",
            Direction::Decreasing => "dec",
            Direction::Any => "any",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "inc" => Some(Direction::Increasing),
            "dec" => Some(Direction::Decreasing),
            "any" => Some(Direction::Any),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Piece {
    pub lo: BigRational,
    pub hi: BigRational,
    pub direction: Direction,
    pub expr: Polynomial,
}

impl Piece {
    pub fn new(lo: BigRational, hi: BigRational, direction: Direction, expr: Polynomial) -> Self {
        Piece { lo, hi, direction, expr }
    }
}

/// A function on `[0,1]` given by consecutive closed pieces. Neighbouring
/// pieces share their breakpoint; at a breakpoint both values count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PiecewiseMonotoneFn {
    pieces: Vec<Piece>,
}

impl PiecewiseMonotoneFn {
    /// Validates coverage of `[0,1]`, declared directions on a dyadic grid of
    /// each piece (exactly where the derivative's roots are rational) and
    /// non-negativity.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        Self::validated(pieces).map_err(|(_, e)| e)
    }

    /// Like `new`, but a failure also names the index of the piece at fault.
    pub(crate) fn validated(pieces: Vec<Piece>) -> std::result::Result<Self, (usize, Error)> {
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err((0, Error::BadPiecewise("no pieces".into()))),
        };
        if !first.lo.is_zero() {
            return Err((0, Error::BadPiecewise(format!("first piece starts at {}, not 0", first.lo))));
        }
        if !last.hi.is_one() {
            let at = pieces.len() - 1;
            return Err((at, Error::BadPiecewise(format!("last piece ends at {}, not 1", last.hi))));
        }
        for (k, piece) in pieces.iter().enumerate() {
            if piece.lo >= piece.hi {
                return Err((k, Error::BadPiecewise(format!("piece {k} has empty domain [{},{}]", piece.lo, piece.hi))));
            }
            if let Some(next) = pieces.get(k + 1) {
                if next.lo != piece.hi {
                    let message = format!("piece {k} ends at {} but piece {} starts at {}", piece.hi, k + 1, next.lo);
                    return Err((k + 1, Error::BadPiecewise(message)));
                }
            }
            check_direction(k, piece).map_err(|e| (k, e))?;
            check_non_negative(k, piece).map_err(|e| (k, e))?;
        }
        Ok(PiecewiseMonotoneFn { pieces })
    }

    /// A single piece covering `[0,1]`.
    pub fn single(direction: Direction, expr: Polynomial) -> Result<Self> {
        Self::new(vec![Piece::new(BigRational::zero(), BigRational::one(), direction, expr)])
    }

    pub fn constant(c: BigRational) -> Result<Self> {
        Self::single(Direction::Increasing, Polynomial::constant(c))
    }

    pub fn identity() -> Self {
        Self::single(Direction::Increasing, Polynomial::x()).expect("identity is monotone")
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Ascending breakpoints, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = self.pieces.iter().map(|p| p.lo.clone()).collect();
        out.push(BigRational::one());
        out
    }

    /// Values of all pieces defined at `x`.
    pub fn values_at(&self, x: &BigRational) -> Vec<BigRational> {
        self.pieces
            .iter()
            .filter(|p| &p.lo <= x && x <= &p.hi)
            .map(|p| p.expr.eval(x))
            .collect()
    }
}

impl fmt::Display for PiecewiseMonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("piecewise {")?;
        for (k, p) in self.pieces.iter().enumerate() {
            let sep = if k == 0 { " " } else { "; " };
            write!(f, "{sep}[{},{}] {}: {}", p.lo, p.hi, p.direction.keyword(), p.expr)?;
        }
        f.write_str(" }")
    }
}

/// Rational critical points of `expr` strictly inside `(lo, hi)`, or `None`
/// when the derivative has a root there that is not rational.
pub(crate) fn interior_critical_points(expr: &Polynomial, lo: &BigRational, hi: &BigRational) -> Option<Vec<BigRational>> {
    let d = expr.derivative();
    if d.is_zero() {
        return Some(Vec::new());
    }
    let roots = d.rational_roots()?;
    let mut rest = d;
    for r in &roots {
        rest = rest.deflate(r);
    }
    if rest.degree().unwrap_or(0) > 0 && rest.count_roots_between(lo, hi) > 0 {
        return None;
    }
    Some(roots.into_iter().filter(|r| lo < r && r < hi).collect())
}

fn spot_grid<'a>(lo: &'a BigRational, hi: &BigRational) -> impl Iterator<Item = BigRational> + 'a {
    let step = (hi - lo) / BigRational::from_integer(SPOT_CHECK_STEPS.into());
    (0..=SPOT_CHECK_STEPS).map(move |k| lo + &step * BigRational::from_integer(k.into()))
}

fn check_direction(k: usize, piece: &Piece) -> Result<()> {
    let sign = match piece.direction {
        Direction::Increasing => BigRational::one(),
        Direction::Decreasing => -BigRational::one(),
        Direction::Any => return Ok(()),
    };
    let bad = |x: &BigRational| {
        Error::BadPiecewise(format!(
            "piece {k} is declared {} but is not on [{},{}] near {x}",
            piece.direction.keyword(),
            piece.lo,
            piece.hi
        ))
    };
    match interior_critical_points(&piece.expr, &piece.lo, &piece.hi) {
        Some(crits) => {
            // between consecutive critical points the derivative keeps its sign
            let d = piece.expr.derivative();
            let mut cuts = vec![piece.lo.clone()];
            cuts.extend(crits);
            cuts.push(piece.hi.clone());
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / BigRational::from_integer(2.into());
                if (d.eval(&mid) * &sign).is_negative() {
                    return Err(bad(&mid));
                }
            }
        }
        None => {
            let values: Vec<BigRational> = spot_grid(&piece.lo, &piece.hi).map(|x| piece.expr.eval(&x) * &sign).collect();
            if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
                return Err(bad(&spot_grid(&piece.lo, &piece.hi).nth(i).unwrap()));
            }
        }
    }
    Ok(())
}

fn check_non_negative(k: usize, piece: &Piece) -> Result<()> {
    let candidates: Vec<BigRational> = match piece.direction {
        Direction::Increasing => vec![piece.lo.clone()],
        Direction::Decreasing => vec![piece.hi.clone()],
        Direction::Any => match interior_critical_points(&piece.expr, &piece.lo, &piece.hi) {
            Some(mut crits) => {
                crits.push(piece.lo.clone());
                crits.push(piece.hi.clone());
                crits
            }
            None => spot_grid(&piece.lo, &piece.hi).collect(),
        },
    };
    for x in candidates {
        let v = piece.expr.eval(&x);
        if v.is_negative() {
            return Err(Error::Negative(format!("piece {k} takes value {v} at {x}")));
        }
    }
    Ok(())
}

/// A validated function prepared for exact range queries.
#[derive(Clone, Debug)]
pub(crate) struct RangeOracle {
    pieces: Vec<Piece>,
    critical: Vec<Vec<BigRational>>,
}

impl RangeOracle {
    pub(crate) fn new(f: &PiecewiseMonotoneFn) -> Result<Self> {
        let mut critical = Vec::with_capacity(f.pieces.len());
        for (k, p) in f.pieces.iter().enumerate() {
            let crits = match p.direction {
                Direction::Any => interior_critical_points(&p.expr, &p.lo, &p.hi).ok_or_else(|| Error::NonEvaluablePiece {
                    piece: k,
                    reason: format!("derivative of {} has an irrational root in ({},{})", p.expr, p.lo, p.hi),
                })?,
                _ => Vec::new(),
            };
            for x in &crits {
                let v = p.expr.eval(x);
                if v.is_negative() {
                    return Err(Error::Negative(format!("piece {k} takes value {v} at {x}")));
                }
            }
            critical.push(crits);
        }
        Ok(RangeOracle {
            pieces: f.pieces.clone(),
            critical,
        })
    }

    /// Exact `(inf, sup)` of the function over `[a, b] ∩ [0,1]`.
    pub(crate) fn range(&self, a: &BigRational, b: &BigRational) -> Result<(BigRational, BigRational)> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        let a = if a < &zero { &zero } else { a };
        let b = if b > &one { &one } else { b };
        if a > b {
            return Err(Error::OutOfRange(format!("[{a},{b}]")));
        }
        let start = self.pieces.partition_point(|p| &p.hi < a);
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        let mut push = |v: BigRational| {
            if lo.as_ref().is_none_or(|l| &v < l) {
                lo = Some(v.clone());
            }
            if hi.as_ref().is_none_or(|h| &v > h) {
                hi = Some(v);
            }
        };
        for (p, crits) in self.pieces[start..].iter().zip(&self.critical[start..]) {
            if &p.lo > b {
                break;
            }
            let s = if &p.lo > a { &p.lo } else { a };
            let t = if &p.hi < b { &p.hi } else { b };
            push(p.expr.eval(s));
            push(p.expr.eval(t));
            for c in crits.iter().filter(|c| s < *c && *c < t) {
                push(p.expr.eval(c));
            }
        }
        Ok((lo.expect("range is non-empty"), hi.expect("range is non-empty")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(cs: &[(i64, i64)]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    fn tent() -> PiecewiseMonotoneFn {
        PiecewiseMonotoneFn::new(vec![
            Piece::new(q(0, 1), q(1, 2), Direction::Increasing, poly(&[(0, 1), (2, 1)])),
            Piece::new(q(1, 2), q(1, 1), Direction::Decreasing, poly(&[(2, 1), (-2, 1)])),
        ])
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let x = Polynomial::x();
        assert!(matches!(
            PiecewiseMonotoneFn::new(vec![Piece::new(q(0, 1), q(1, 2), Direction::Increasing, x.clone())]),
            Err(Error::BadPiecewise(_))
        ));
        assert!(matches!(
            PiecewiseMonotoneFn::single(Direction::Decreasing, x.clone()),
            Err(Error::BadPiecewise(_))
        ));
        assert!(matches!(
            PiecewiseMonotoneFn::single(Direction::Increasing, poly(&[(-1, 2), (1, 1)])),
            Err(Error::Negative(_))
        ));
        assert!(matches!(
            PiecewiseMonotoneFn::new(vec![
                Piece::new(q(0, 1), q(1, 2), Direction::Increasing, x.clone()),
                Piece::new(q(3, 4), q(1, 1), Direction::Increasing, x),
            ]),
            Err(Error::BadPiecewise(_))
        ));
    }

    #[test]
    fn ranges_cover_breakpoints() {
        let oracle = RangeOracle::new(&tent()).unwrap();
        assert_eq!(oracle.range(&q(1, 4), &q(3, 4)).unwrap(), (q(1, 2), q(1, 1)));
        assert_eq!(oracle.range(&q(1, 2), &q(1, 2)).unwrap(), (q(1, 1), q(1, 1)));
        assert_eq!(oracle.range(&q(0, 1), &q(1, 8)).unwrap(), (q(0, 1), q(1, 4)));
        assert_eq!(oracle.range(&q(-1, 1), &q(2, 1)).unwrap(), (q(0, 1), q(1, 1)));
    }

    #[test]
    fn any_pieces_use_critical_points() {
        // 4x(1-x) peaks at 1/2
        let f = PiecewiseMonotoneFn::single(Direction::Any, poly(&[(0, 1), (4, 1), (-4, 1)])).unwrap();
        let oracle = RangeOracle::new(&f).unwrap();
        assert_eq!(oracle.range(&q(1, 4), &q(3, 4)).unwrap(), (q(3, 4), q(1, 1)));
        assert_eq!(oracle.range(&q(0, 1), &q(1, 4)).unwrap(), (q(0, 1), q(3, 4)));

        // x^3 - x + 1 has critical points at ±1/sqrt(3)
        let g = PiecewiseMonotoneFn::single(Direction::Any, poly(&[(1, 1), (-1, 1), (0, 1), (1, 1)])).unwrap();
        assert!(matches!(RangeOracle::new(&g), Err(Error::NonEvaluablePiece { piece: 0, .. })));
    }

    #[test]
    fn display_round_trip_text() {
        assert_eq!(tent().to_string(), "piecewise { [0,1/2] inc: 2*x; [1/2,1] dec: -2*x + 2 }");
    }
}
