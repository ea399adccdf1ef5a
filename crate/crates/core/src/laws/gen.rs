//! Seeded random generators for the law suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::measure::FiniteSupportMeasure;
use crate::monad::{Kernel, PointMap};
use crate::spaces::{FinitePoset, MonotoneMap, PointFn};
use crate::valuation::ElementaryValuation;

pub type Rng8 = ChaCha8Rng;

/// A small non-negative rational, or `inf` one time in ten when allowed.
pub fn ext(rng: &mut Rng8, allow_inf: bool) -> ExtNonNeg {
    match rng.gen_range(0..10) {
        0 => ExtNonNeg::zero(),
        1 if allow_inf => ExtNonNeg::Infinity,
        2 => ExtNonNeg::one(),
        _ => ExtNonNeg::ratio(rng.gen_range(0..=9), rng.gen_range(1..=4)),
    }
}

/// A value in `[a, b]`; `a <= b` is assumed.
pub fn between(rng: &mut Rng8, a: &ExtNonNeg, b: &ExtNonNeg) -> ExtNonNeg {
    if a == b {
        return a.clone();
    }
    match b {
        ExtNonNeg::Infinity => match rng.gen_range(0..6) {
            0 => ExtNonNeg::Infinity,
            1 => a.clone(),
            _ => a.add(&ext(rng, false)),
        },
        ExtNonNeg::Finite(hi) => {
            let lo = a.as_finite().expect("a <= b finite");
            let t = [(0, 1), (1, 4), (1, 3), (1, 2), (1, 1)][rng.gen_range(0..5)];
            let t = num_rational::BigRational::new(t.0.into(), t.1.into());
            ExtNonNeg::from(lo + (hi - lo) * t)
        }
    }
}

/// Values the generators know how to draw, including draws constrained to
/// lie above given values in the d-rag order.
pub trait Sample: DRag {
    fn sample(rng: &mut Rng8) -> Self;
    /// A value above every element of `below`, which must have an upper
    /// bound.
    fn sample_above(rng: &mut Rng8, below: &[&Self]) -> Self;
    /// A monotone table above `base` pointwise. Relations of `space` must only
    /// go from lower to higher indices.
    fn monotone_table(rng: &mut Rng8, space: &FinitePoset, base: &[Self]) -> Vec<Self>;
}

impl Sample for ExtNonNeg {
    fn sample(rng: &mut Rng8) -> Self {
        ext(rng, true)
    }

    fn sample_above(rng: &mut Rng8, below: &[&Self]) -> Self {
        let floor = below.iter().map(|v| (*v).clone()).max().unwrap_or_else(ExtNonNeg::zero);
        if rng.gen_bool(0.3) {
            floor
        } else {
            floor.add(&ext(rng, true))
        }
    }

    fn monotone_table(rng: &mut Rng8, space: &FinitePoset, base: &[Self]) -> Vec<Self> {
        let mut table: Vec<ExtNonNeg> = Vec::with_capacity(space.len());
        for x in space.points() {
            let mut below: Vec<&ExtNonNeg> = (0..x).filter(|&p| space.leq(p, x)).map(|p| &table[p]).collect();
            below.push(&base[x]);
            let v = Self::sample_above(rng, &below);
            table.push(v);
        }
        table
    }
}

impl Sample for IntervalValue {
    fn sample(rng: &mut Rng8) -> Self {
        if rng.gen_bool(0.2) {
            let grid = IntervalValue::sample_grid();
            return grid.choose(rng).expect("grid").clone();
        }
        let allow_inf = rng.gen_bool(0.3);
        let lo = ext(rng, allow_inf);
        let hi = lo.add(&ext(rng, true));
        IntervalValue::new(lo, hi).expect("lo <= hi")
    }

    fn sample_above(rng: &mut Rng8, below: &[&Self]) -> Self {
        if below.is_empty() {
            return Self::sample(rng);
        }
        let lo_floor = below.iter().map(|v| v.lo().clone()).max().expect("non-empty");
        let hi_ceiling = below.iter().map(|v| v.hi().clone()).min().expect("non-empty");
        let lo = between(rng, &lo_floor, &hi_ceiling);
        let hi = between(rng, &lo, &hi_ceiling);
        IntervalValue::new(lo, hi).expect("lo <= hi")
    }

    /// Lower endpoints rise along the order and upper endpoints fall, with
    /// each lower endpoint kept below every upper endpoint above it.
    fn monotone_table(rng: &mut Rng8, space: &FinitePoset, base: &[Self]) -> Vec<Self> {
        let n = space.len();
        let ceiling: Vec<ExtNonNeg> = (0..n)
            .map(|x| (x..n).filter(|&y| space.leq(x, y)).map(|y| base[y].hi().clone()).min().expect("reflexive"))
            .collect();
        let mut lo: Vec<ExtNonNeg> = Vec::with_capacity(n);
        for x in 0..n {
            let floor = (0..x)
                .filter(|&p| space.leq(p, x))
                .map(|p| lo[p].clone())
                .fold(base[x].lo().clone(), ExtNonNeg::max);
            let v = between(rng, &floor, &ceiling[x]);
            lo.push(v);
        }
        let mut hi = vec![ExtNonNeg::zero(); n];
        for x in (0..n).rev() {
            let floor = (x + 1..n)
                .filter(|&y| space.leq(x, y))
                .map(|y| hi[y].clone())
                .fold(lo[x].clone(), ExtNonNeg::max);
            hi[x] = between(rng, &floor, base[x].hi());
        }
        lo.into_iter()
            .zip(hi)
            .map(|(a, b)| IntervalValue::new(a, b).expect("lo <= hi"))
            .collect()
    }
}

/// A random poset on `1..=max_points` points named `p0, p1, …`, whose order
/// only relates lower indices to higher ones.
pub fn poset(rng: &mut Rng8, max_points: usize) -> FinitePoset {
    let n = rng.gen_range(1..=max_points.max(1));
    let density = [0.0, 0.2, 0.4, 0.7][rng.gen_range(0..4)];
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                let via = leq[k].clone();
                for (cell, &up) in leq[i].iter_mut().zip(&via) {
                    *cell |= up;
                }
            }
        }
    }
    FinitePoset::new((0..n).map(|i| format!("p{i}")).collect(), leq).expect("closed order")
}

/// A monotone map; the index order must be a linear extension of `space`,
/// as it is for the generated posets.
pub fn monotone_map<R: Sample>(rng: &mut Rng8, space: &FinitePoset) -> MonotoneMap<R> {
    let base = vec![R::bottom(); space.len()];
    MonotoneMap::new(space.clone(), R::monotone_table(rng, space, &base)).expect("built monotone")
}

/// A monotone map `k ⊑ k'` pointwise above a given one.
pub fn monotone_map_above<R: Sample>(rng: &mut Rng8, base: &MonotoneMap<R>) -> MonotoneMap<R> {
    let space = base.domain();
    MonotoneMap::new(space.clone(), R::monotone_table(rng, space, base.table())).expect("built monotone")
}

/// An antitone table into `[0, inf]`.
pub fn antitone_fn(rng: &mut Rng8, space: &FinitePoset, allow_inf: bool) -> PointFn {
    let n = space.len();
    let mut values = vec![ExtNonNeg::zero(); n];
    for x in (0..n).rev() {
        let floor = (x + 1..n)
            .filter(|&y| space.leq(x, y))
            .map(|y| values[y].clone())
            .max()
            .unwrap_or_else(ExtNonNeg::zero);
        values[x] = if rng.gen_bool(0.3) { floor } else { floor.add(&ext(rng, allow_inf)) };
    }
    PointFn::new(space.clone(), values).expect("total")
}

/// An arbitrary table into `[0, inf]`.
pub fn point_fn(rng: &mut Rng8, space: &FinitePoset, allow_inf: bool) -> PointFn {
    let values = space.points().map(|_| ext(rng, allow_inf)).collect();
    PointFn::new(space.clone(), values).expect("total")
}

pub fn valuation<R: Sample>(rng: &mut Rng8, space: &FinitePoset, max_terms: usize) -> ElementaryValuation<R> {
    let n = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..n).map(|_| (R::sample(rng), rng.gen_range(0..space.len()))).collect();
    ElementaryValuation::new(space.clone(), terms).expect("points in space")
}

/// A monotone point map; falls back to a constant when a random attempt
/// runs out of upper bounds.
pub fn point_map(rng: &mut Rng8, source: &FinitePoset, target: &FinitePoset) -> PointMap {
    'attempt: for _ in 0..8 {
        let mut table: Vec<usize> = Vec::with_capacity(source.len());
        for x in source.points() {
            let images: Vec<usize> = (0..x).filter(|&p| source.leq(p, x)).map(|p| table[p]).collect();
            let candidates: Vec<usize> = target.points().filter(|&y| images.iter().all(|&i| target.leq(i, y))).collect();
            match candidates.choose(rng) {
                Some(&y) => table.push(y),
                None => continue 'attempt,
            }
        }
        return PointMap::new(source.clone(), target.clone(), table).expect("built monotone");
    }
    PointMap::constant(source.clone(), target.clone(), rng.gen_range(0..target.len())).expect("point in target")
}

/// `x ↦ Σ_k c_k(x) × δ_{φ_k(x)}` with monotone coefficient maps `c_k` and
/// monotone point maps `φ_k`; monotone by construction.
pub fn kernel<R: Sample>(rng: &mut Rng8, source: &FinitePoset, target: &FinitePoset, max_terms: usize) -> Kernel<R> {
    let k = rng.gen_range(1..=max_terms.max(1));
    let parts: Vec<(MonotoneMap<R>, PointMap)> = (0..k)
        .map(|_| (monotone_map(rng, source), point_map(rng, source, target)))
        .collect();
    let table = source
        .points()
        .map(|x| {
            let terms = parts.iter().map(|(c, phi)| (c.at(x).clone(), phi.apply(x))).collect();
            ElementaryValuation::new(target.clone(), terms).expect("points in target")
        })
        .collect();
    Kernel::declared(source.clone(), target.clone(), table).expect("total kernel")
}

/// Masses drawn independently; about half the points get mass zero.
pub fn measure(rng: &mut Rng8, space: &FinitePoset, allow_inf: bool, nonzero: bool) -> FiniteSupportMeasure {
    let mut masses: Vec<ExtNonNeg> = space
        .points()
        .map(|_| if rng.gen_bool(0.5) { ExtNonNeg::zero() } else { ext(rng, allow_inf) })
        .collect();
    if nonzero && masses.iter().all(ExtNonNeg::is_zero) {
        let x = rng.gen_range(0..space.len());
        masses[x] = ExtNonNeg::ratio(rng.gen_range(1..=4), rng.gen_range(1..=3));
    }
    FiniteSupportMeasure::new(space.clone(), masses).expect("one mass per point")
}
