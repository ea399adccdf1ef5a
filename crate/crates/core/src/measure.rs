//! Finite-support measures on finite posets, their lower and upper
//! integrals, and the interval-valued functional `rval μ` built from them.
//!
//! On a finite poset every set is measurable and every measure is τ-smooth.
//! Closed sets are lower sets and compact saturated sets are upper sets, so
//! the smallest closed support of `μ` is `↓S` and its smallest compact
//! saturated support is `↑S`, where `S` is the set of positive-mass points.

use std::fmt;

use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::error::{Error, Result};
use crate::monad::PointMap;
use crate::spaces::{closed_support, endpoint_maps, min_upper_support, FinitePoset, MonotoneMap, PointFn, PointSet, UpperSet};
use crate::valuation::ElementaryValuation;

/// `Σ m_x δ_x` with masses in `[0, inf]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSupportMeasure {
    space: FinitePoset,
    masses: Vec<ExtNonNeg>,
}

impl FiniteSupportMeasure {
    /// One mass per point, in point order.
    pub fn new(space: FinitePoset, masses: Vec<ExtNonNeg>) -> Result<Self> {
        if masses.len() != space.len() {
            return Err(Error::NotTotal(format!("{} masses for {} points", masses.len(), space.len())));
        }
        Ok(FiniteSupportMeasure { space, masses })
    }

    /// Masses given as `(point, mass)` pairs; repeated points accumulate and
    /// unlisted points get mass zero.
    pub fn from_masses(space: FinitePoset, masses: Vec<(usize, ExtNonNeg)>) -> Result<Self> {
        let mut table = vec![ExtNonNeg::zero(); space.len()];
        for (x, m) in masses {
            space.check_point(x)?;
            table[x] = table[x].add(&m);
        }
        Ok(FiniteSupportMeasure { space, masses: table })
    }

    pub fn from_named<S: AsRef<str>>(space: FinitePoset, masses: Vec<(S, ExtNonNeg)>) -> Result<Self> {
        let masses = masses
            .into_iter()
            .map(|(name, m)| Ok((space.index_of(name.as_ref())?, m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masses(space, masses)
    }

    pub fn dirac(space: FinitePoset, x: usize) -> Result<Self> {
        Self::from_masses(space, vec![(x, ExtNonNeg::one())])
    }

    pub fn space(&self) -> &FinitePoset {
        &self.space
    }

    pub fn mass(&self, x: usize) -> &ExtNonNeg {
        &self.masses[x]
    }

    pub fn masses(&self) -> &[ExtNonNeg] {
        &self.masses
    }

    pub fn total_mass(&self) -> ExtNonNeg {
        ExtNonNeg::sum(self.masses.iter())
    }

    pub fn is_bounded(&self) -> bool {
        !self.total_mass().is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.masses.iter().all(ExtNonNeg::is_zero)
    }

    /// Measure of an arbitrary set of points.
    pub fn measure_of(&self, set: &PointSet) -> ExtNonNeg {
        ExtNonNeg::sum(set.iter().map(|&x| &self.masses[x]))
    }

    /// Points of positive mass.
    pub fn mass_points(&self) -> PointSet {
        self.space.points().filter(|&x| !self.masses[x].is_zero()).collect()
    }

    /// `supp μ = ↓S`.
    pub fn support(&self) -> PointSet {
        closed_support(&self.space, &self.mass_points())
    }

    /// The smallest compact saturated support `↑S`.
    pub fn min_compact_support(&self) -> Result<UpperSet> {
        min_upper_support(&self.space, &self.mass_points()).map_err(|_| Error::ZeroMeasure)
    }

    fn ensure_nonzero_bounded(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::ZeroMeasure);
        }
        if !self.is_bounded() {
            return Err(Error::UnboundedMeasure);
        }
        Ok(())
    }
}

impl fmt::Display for FiniteSupportMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("measure {")?;
        let mut sep = " ";
        for x in self.mass_points() {
            write!(f, "{sep}{} @ {}", self.masses[x], self.space.name(x))?;
            sep = "; ";
        }
        f.write_str(" }")
    }
}

/// `∫⁻ f dμ = sup_r ∫ min(f, r) dμ`.
///
/// For a finite sum of point masses the supremum is reached termwise, which
/// gives `Σ_x μ{x} ·ℓ f(x)`: a point with `f = inf` and positive mass makes
/// the integral infinite, and an infinite mass over `f = 0` contributes `0`.
pub fn lower_integral(f: &PointFn, mu: &FiniteSupportMeasure) -> Result<ExtNonNeg> {
    mu.space.ensure_same(f.domain())?;
    Ok(mu
        .masses
        .iter()
        .zip(f.values())
        .fold(ExtNonNeg::zero(), |acc, (m, v)| acc.add(&m.mul_left(v))))
}

/// `∫_0^inf μ(f > t) dt`, summed exactly as rectangles between consecutive
/// distinct values of `f`.
pub fn choquet_integral(f: &PointFn, mu: &FiniteSupportMeasure) -> Result<ExtNonNeg> {
    mu.space.ensure_same(f.domain())?;
    let mut levels: Vec<&ExtNonNeg> = f.values().iter().collect();
    levels.sort();
    levels.dedup();
    let mut total = ExtNonNeg::zero();
    let mut previous = ExtNonNeg::zero();
    for level in levels {
        if level.is_zero() {
            continue;
        }
        // μ(f > t) is constant for t in [previous, level)
        let above: PointSet = mu.space.points().filter(|&x| f.at(x) >= level).collect();
        let height = mu.measure_of(&above);
        let width = level.saturating_sub(&previous);
        total = total.add(&width.mul_left(&height));
        previous = level.clone();
    }
    Ok(total)
}

/// Image measure `g[μ](E) = μ(g⁻¹(E))`.
pub fn pushforward(g: &PointMap, mu: &FiniteSupportMeasure) -> Result<FiniteSupportMeasure> {
    mu.space.ensure_same(g.source())?;
    let masses = mu
        .space
        .points()
        .map(|x| (g.apply(x), mu.masses[x].clone()))
        .collect();
    FiniteSupportMeasure::from_masses(g.target().clone(), masses)
}

/// Outcome of a μ-boundedness check, with the minimal witness `Q = ↑S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Boundedness {
    pub bounded: bool,
    pub witness: UpperSet,
    /// `Q ∩ supp μ`, the set the integrand must be finite on.
    pub region: PointSet,
}

/// Whether `f` is bounded on `Q ∩ supp μ` for some compact saturated support
/// `Q`. Every such `Q` contains `↑S`, so the minimal one decides.
pub fn is_mu_bounded(f: &PointFn, mu: &FiniteSupportMeasure) -> Result<Boundedness> {
    mu.space.ensure_same(f.domain())?;
    if mu.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    let witness = mu.min_compact_support()?;
    let support = mu.support();
    let region: PointSet = witness.members().intersection(&support).copied().collect();
    let bounded = region.iter().all(|&x| !f.at(x).is_infinite());
    Ok(Boundedness { bounded, witness, region })
}

/// `∫⁺ f dμ`: the lower integral when `f` is μ-bounded, `inf` otherwise.
/// `f` must be antitone (upper semicontinuous) and `μ` non-zero and bounded.
pub fn upper_integral(f: &PointFn, mu: &FiniteSupportMeasure) -> Result<ExtNonNeg> {
    mu.space.ensure_same(f.domain())?;
    mu.ensure_nonzero_bounded()?;
    f.ensure_antitone()?;
    let check = is_mu_bounded(f, mu)?;
    if !check.bounded {
        return Ok(ExtNonNeg::Infinity);
    }
    // the usual integral of f restricted to Q ∩ supp μ
    Ok(check
        .region
        .iter()
        .fold(ExtNonNeg::zero(), |acc, &x| acc.add(&mu.masses[x].mul_left(f.at(x)))))
}

/// `rval μ (h) = [∫⁻ h⁻ dμ, ∫⁺ h⁺ dμ]`.
pub fn rval_evaluate(mu: &FiniteSupportMeasure, h: &MonotoneMap<IntervalValue>) -> Result<IntervalValue> {
    mu.space.ensure_same(h.domain())?;
    mu.ensure_nonzero_bounded()?;
    let (lower, upper) = endpoint_maps(h);
    IntervalValue::new(lower_integral(&lower, mu)?, upper_integral(&upper, mu)?)
}

/// A linear, monotone functional on interval-valued test functions: a
/// continuous interval-valued valuation presented by its evaluator.
pub trait IntervalFunctional {
    fn space(&self) -> &FinitePoset;
    fn apply(&self, h: &MonotoneMap<IntervalValue>) -> Result<IntervalValue>;
}

/// A linear, monotone functional on test functions into `[0, inf]`: an
/// ordinary continuous valuation presented by its integral.
pub trait ScalarFunctional {
    fn space(&self) -> &FinitePoset;
    fn apply(&self, f: &MonotoneMap<ExtNonNeg>) -> Result<ExtNonNeg>;
}

impl IntervalFunctional for ElementaryValuation<IntervalValue> {
    fn space(&self) -> &FinitePoset {
        ElementaryValuation::space(self)
    }
    fn apply(&self, h: &MonotoneMap<IntervalValue>) -> Result<IntervalValue> {
        self.evaluate(h)
    }
}

impl ScalarFunctional for ElementaryValuation<ExtNonNeg> {
    fn space(&self) -> &FinitePoset {
        ElementaryValuation::space(self)
    }
    fn apply(&self, f: &MonotoneMap<ExtNonNeg>) -> Result<ExtNonNeg> {
        self.evaluate(f)
    }
}

/// `rval μ` as a functional.
#[derive(Clone, Debug)]
pub struct Rval<'a>(pub &'a FiniteSupportMeasure);

impl IntervalFunctional for Rval<'_> {
    fn space(&self) -> &FinitePoset {
        &self.0.space
    }
    fn apply(&self, h: &MonotoneMap<IntervalValue>) -> Result<IntervalValue> {
        rval_evaluate(self.0, h)
    }
}

/// `f ↦ ∫⁻ f dμ` as an ordinary valuation.
impl ScalarFunctional for FiniteSupportMeasure {
    fn space(&self) -> &FinitePoset {
        &self.space
    }
    fn apply(&self, f: &MonotoneMap<ExtNonNeg>) -> Result<ExtNonNeg> {
        lower_integral(&PointFn::from(f), self)
    }
}

/// `[f, inf·1]`: the test function with lower part `f` and no upper
/// information.
pub fn lower_only(f: &MonotoneMap<ExtNonNeg>) -> MonotoneMap<IntervalValue> {
    let table = f.table().iter().map(|v| IntervalValue::from_below(v.clone())).collect();
    MonotoneMap::from_monotone_table(f.domain().clone(), table)
}

/// `F⁻([f, inf·1])`: the integral of `f` against the ordinary valuation
/// induced by the lower endpoint of `F`.
pub fn view_from_left<F: IntervalFunctional + ?Sized>(functional: &F, f: &MonotoneMap<ExtNonNeg>) -> Result<ExtNonNeg> {
    functional.space().ensure_same(f.domain())?;
    Ok(functional.apply(&lower_only(f))?.lo().clone())
}

/// The ordinary valuation `ν_F` as a functional.
pub struct ViewFromLeft<'a, F: ?Sized>(pub &'a F);

impl<F: IntervalFunctional + ?Sized> ScalarFunctional for ViewFromLeft<'_, F> {
    fn space(&self) -> &FinitePoset {
        self.0.space()
    }
    fn apply(&self, f: &MonotoneMap<ExtNonNeg>) -> Result<ExtNonNeg> {
        view_from_left(self.0, f)
    }
}

/// The least interval-valued valuation whose view from the left is `ν`:
/// `h ↦ [ν(h⁻), inf]`.
pub struct LeastExtension<N>(pub N);

pub fn least_extension<N: ScalarFunctional>(nu: N) -> LeastExtension<N> {
    LeastExtension(nu)
}

impl<N: ScalarFunctional> IntervalFunctional for LeastExtension<N> {
    fn space(&self) -> &FinitePoset {
        self.0.space()
    }
    fn apply(&self, h: &MonotoneMap<IntervalValue>) -> Result<IntervalValue> {
        self.0.space().ensure_same(h.domain())?;
        let (lower, _) = endpoint_maps(h);
        let lower = lower.to_monotone()?;
        Ok(IntervalValue::from_below(self.0.apply(&lower)?))
    }
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

    fn pf(space: &FinitePoset, vals: &[&str]) -> PointFn {
        PointFn::new(space.clone(), vals.iter().map(|v| e(v)).collect()).unwrap()
    }

    fn xy() -> FinitePoset {
        FinitePoset::from_relations::<&str>(&["x", "y"], &[]).unwrap()
    }

    /// `sup_r Σ m ·ℓ min(f, r)`, with `r` ranging over the finite values of
    /// `f` and one value beyond them, plus the limit when some positive-mass
    /// point has `f = inf`.
    fn truncation_sup(f: &PointFn, mu: &FiniteSupportMeasure) -> ExtNonNeg {
        let finite_max = f
            .values()
            .iter()
            .filter(|v| !v.is_infinite())
            .cloned()
            .max()
            .unwrap_or_else(ExtNonNeg::zero);
        let mut best = ExtNonNeg::zero();
        for r in [finite_max.clone(), finite_max.add(&ExtNonNeg::one())] {
            let truncated = f.map(|v| v.clone().min(r.clone()));
            let value = mu
                .masses()
                .iter()
                .zip(truncated.values())
                .fold(ExtNonNeg::zero(), |acc, (m, v)| acc.add(&m.mul_left(v)));
            best = best.max(value);
        }
        let blows_up = mu
            .space()
            .points()
            .any(|x| f.at(x).is_infinite() && !mu.mass(x).is_zero());
        if blows_up {
            ExtNonNeg::Infinity
        } else {
            best
        }
    }

    #[test]
    fn lower_integral_examples() {
        let s = xy();
        let mu = FiniteSupportMeasure::from_named(s.clone(), vec![("x", e("1/2")), ("y", e("1/2"))]).unwrap();
        let f = pf(&s, &["1", "3"]);
        assert_eq!(lower_integral(&f, &mu).unwrap(), e("2"));
        assert_eq!(choquet_integral(&f, &mu).unwrap(), e("2"));
        assert_eq!(truncation_sup(&f, &mu), e("2"));

        let blow = pf(&s, &["inf", "0"]);
        assert_eq!(lower_integral(&blow, &mu).unwrap(), e("inf"));
    }

    #[test]
    fn almost_everywhere_zero_integrand() {
        let s = xy();
        let mu = FiniteSupportMeasure::from_named(s.clone(), vec![("x", e("1"))]).unwrap();
        // zero on the only mass point, infinite elsewhere
        let f = pf(&s, &["0", "inf"]);
        let scaled = f.map(|v| ExtNonNeg::Infinity.mul_left(v));
        assert_eq!(lower_integral(&scaled, &mu).unwrap(), e("0"));
        assert_eq!(ExtNonNeg::Infinity.mul_left(&lower_integral(&f, &mu).unwrap()), e("0"));
    }

    #[test]
    fn choquet_edge_cases() {
        let s = xy();
        let mu = FiniteSupportMeasure::from_named(s.clone(), vec![("x", e("2/3")), ("y", e("inf"))]).unwrap();
        assert_eq!(choquet_integral(&pf(&s, &["0", "0"]), &mu).unwrap(), e("0"));
        assert_eq!(choquet_integral(&pf(&s, &["5", "0"]), &mu).unwrap(), e("10/3"));
        assert_eq!(choquet_integral(&pf(&s, &["5", "1/9"]), &mu).unwrap(), e("inf"));
        let bounded = FiniteSupportMeasure::from_named(s.clone(), vec![("x", e("2/3")), ("y", e("1/4"))]).unwrap();
        assert_eq!(choquet_integral(&pf(&s, &["3", "3"]), &bounded).unwrap(), e("11/4"));
    }

    #[test]
    fn truncation_oracle_agrees() {
        let s = FinitePoset::chain(3);
        let values = ["0", "1/2", "3", "inf"];
        let masses = ["0", "1/3", "2", "inf"];
        for a in values {
            for b in values {
                for c in values {
                    for m in masses {
                        let f = pf(&s, &[a, b, c]);
                        let mu = FiniteSupportMeasure::new(s.clone(), vec![e(m), e("1/2"), e("0")]).unwrap();
                        assert_eq!(lower_integral(&f, &mu).unwrap(), truncation_sup(&f, &mu));
                    }
                }
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        let s = FinitePoset::chain(3);
        let mu = FiniteSupportMeasure::new(s.clone(), vec![e("1/2"), e("0"), e("1/4")]).unwrap();
        assert_eq!(pushforward(&PointMap::identity(s.clone()), &mu).unwrap(), mu);
        let c = PointMap::constant(s.clone(), s.clone(), 2).unwrap();
        let collapsed = pushforward(&c, &mu).unwrap();
        assert_eq!(collapsed.masses(), &[e("0"), e("0"), e("3/4")]);
        let f = pf(&s, &["1", "2", "4"]);
        assert_eq!(
            lower_integral(&f, &collapsed).unwrap(),
            lower_integral(&f.compose(&s, c.table()), &mu).unwrap()
        );
    }

    #[test]
    fn boundedness_on_chain_and_antichain() {
        let chain = FinitePoset::chain(2);
        let mu = FiniteSupportMeasure::dirac(chain.clone(), 1).unwrap();
        let check = is_mu_bounded(&pf(&chain, &["inf", "5"]), &mu).unwrap();
        assert!(check.bounded);
        assert_eq!(check.witness.members(), &PointSet::from([1]));
        assert_eq!(check.region, PointSet::from([1]));
        assert!(!is_mu_bounded(&pf(&chain, &["inf", "inf"]), &mu).unwrap().bounded);

        let anti = FinitePoset::antichain(3);
        let mu = FiniteSupportMeasure::new(anti.clone(), vec![e("1"), e("1"), e("0")]).unwrap();
        let check = is_mu_bounded(&pf(&anti, &["1", "7", "inf"]), &mu).unwrap();
        assert!(check.bounded);
        assert_eq!(check.region, PointSet::from([0, 1]));

        let zero = FiniteSupportMeasure::new(anti.clone(), vec![e("0"); 3]).unwrap();
        assert_eq!(is_mu_bounded(&pf(&anti, &["1", "1", "1"]), &zero), Err(Error::ZeroMeasure));
    }

    #[test]
    fn upper_integral_examples() {
        let chain = FinitePoset::chain(2);
        let mu = FiniteSupportMeasure::dirac(chain.clone(), 1).unwrap();
        assert_eq!(upper_integral(&pf(&chain, &["inf", "5"]), &mu).unwrap(), e("5"));
        assert_eq!(upper_integral(&pf(&chain, &["inf", "inf"]), &mu).unwrap(), e("inf"));

        let anti = FinitePoset::antichain(2);
        let mu = FiniteSupportMeasure::new(anti.clone(), vec![e("1/3"), e("1/2")]).unwrap();
        assert_eq!(upper_integral(&pf(&anti, &["4", "4"]), &mu).unwrap(), e("10/3"));

        assert!(matches!(
            upper_integral(&pf(&chain, &["1", "5"]), &FiniteSupportMeasure::dirac(chain.clone(), 0).unwrap()),
            Err(Error::NotAntitone(_))
        ));
        let zero = FiniteSupportMeasure::new(chain.clone(), vec![e("0"), e("0")]).unwrap();
        assert_eq!(upper_integral(&pf(&chain, &["1", "1"]), &zero), Err(Error::ZeroMeasure));
        let unbounded = FiniteSupportMeasure::new(chain.clone(), vec![e("inf"), e("0")]).unwrap();
        assert_eq!(upper_integral(&pf(&chain, &["1", "1"]), &unbounded), Err(Error::UnboundedMeasure));
    }

    #[test]
    fn rval_examples() {
        let chain = FinitePoset::chain(2);
        let h = MonotoneMap::new(chain.clone(), vec![iv("[0,3]"), iv("[1,2]")]).unwrap();
        let dq = FiniteSupportMeasure::dirac(chain.clone(), 1).unwrap();
        assert_eq!(rval_evaluate(&dq, &h).unwrap(), iv("[1,2]"));

        let mu = FiniteSupportMeasure::new(chain.clone(), vec![e("1/4"), e("1/2")]).unwrap();
        let c = MonotoneMap::constant(chain.clone(), iv("[2,2]"));
        assert_eq!(rval_evaluate(&mu, &c).unwrap(), iv("[3/2,3/2]"));

        let open_top = MonotoneMap::new(chain.clone(), vec![iv("[0,inf]"), iv("[1,inf]")]).unwrap();
        assert_eq!(rval_evaluate(&mu, &open_top).unwrap(), iv("[1/2,inf]"));
    }

    #[test]
    fn views_from_the_left() {
        let s = xy();
        let f = MonotoneMap::new(s.clone(), vec![e("2"), e("7")]).unwrap();
        let dx = ElementaryValuation::<IntervalValue>::dirac(s.clone(), 0).unwrap();
        assert_eq!(view_from_left(&dx, &f).unwrap(), e("2"));

        let mu = FiniteSupportMeasure::new(s.clone(), vec![e("1/2"), e("1/3")]).unwrap();
        assert_eq!(view_from_left(&Rval(&mu), &f).unwrap(), lower_integral(&PointFn::from(&f), &mu).unwrap());

        let dirac = ElementaryValuation::<ExtNonNeg>::dirac(s.clone(), 1).unwrap();
        let ext = least_extension(dirac.clone());
        let h = MonotoneMap::new(s.clone(), vec![iv("[1,4]"), iv("[3,3]")]).unwrap();
        assert_eq!(ext.apply(&h).unwrap(), iv("[3,inf]"));
        assert_eq!(view_from_left(&ext, &f).unwrap(), dirac.evaluate(&f).unwrap());

        let ext_mu = least_extension(mu.clone());
        let r = rval_evaluate(&mu, &h).unwrap();
        assert!(ext_mu.apply(&h).unwrap().leq(&r));
    }
}
