//! The strong commutative monad on elementary valuations: unit, bind
//! (Kleisli extension), functorial image, strength, dual strength and the
//! Fubini product.
//!
//! `bind` uses the closed form `Σ r_i × f(x_i)`; [`bind_functional`] keeps
//! the defining formula `f†(ν)(k) = ν(λx. f(x)(k))` around as an
//! independent evaluator.

use crate::drag::DRag;
use crate::error::{Error, Result};
use crate::spaces::{FinitePoset, MonotoneMap};
use crate::valuation::{exhaustive_tests, ElementaryValuation};

/// Targets up to this size have kernel monotonicity checked exhaustively.
pub const EXHAUSTIVE_KERNEL_TARGET: usize = 4;

/// A monotone map from points of `source` to elementary valuations on
/// `target`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Kernel<R> {
    source: FinitePoset,
    target: FinitePoset,
    table: Vec<ElementaryValuation<R>>,
    checked: bool,
}

impl<R: DRag> Kernel<R> {
    /// Validates totality and that every image lives on `target`. For small
    /// targets monotonicity is checked against the exhaustive test family
    /// over [`DRag::sample_grid`]; larger targets are rejected here and must
    /// go through [`Kernel::declared`].
    pub fn new(source: FinitePoset, target: FinitePoset, table: Vec<ElementaryValuation<R>>) -> Result<Self> {
        if target.len() > EXHAUSTIVE_KERNEL_TARGET {
            return Err(Error::NotMonotone(format!(
                "cannot check monotonicity on a target of {} points; use Kernel::declared",
                target.len()
            )));
        }
        let kernel = Self::declared(source, target, table)?;
        let tests = exhaustive_tests(&kernel.target, &R::sample_grid());
        for (x, y) in kernel.source.strict_pairs() {
            if !kernel.table[x].leq_on(&kernel.table[y], &tests)? {
                return Err(Error::NotMonotone(format!(
                    "kernel image at {} is not below the image at {}",
                    kernel.source.name(x),
                    kernel.source.name(y)
                )));
            }
        }
        Ok(Kernel { checked: true, ..kernel })
    }

    /// Builds a kernel whose monotonicity the caller vouches for. Totality
    /// and target membership are still checked.
    pub fn declared(source: FinitePoset, target: FinitePoset, table: Vec<ElementaryValuation<R>>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::NotTotal(format!("{} images for {} points", table.len(), source.len())));
        }
        if table.iter().any(|v| v.space() != &target) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Kernel {
            source,
            target,
            table,
            checked: false,
        })
    }

    /// `η`: every point to its Dirac mass.
    pub fn unit(space: FinitePoset) -> Self {
        let table = space
            .points()
            .map(|x| ElementaryValuation::dirac(space.clone(), x).expect("point of space"))
            .collect();
        Kernel {
            source: space.clone(),
            target: space,
            table,
            checked: true,
        }
    }

    /// `η ∘ g` for a monotone point map.
    pub fn from_point_map(g: &PointMap) -> Self {
        let table = g
            .table
            .iter()
            .map(|&y| ElementaryValuation::dirac(g.target.clone(), y).expect("point of target"))
            .collect();
        Kernel {
            source: g.source.clone(),
            target: g.target.clone(),
            table,
            checked: true,
        }
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn at(&self, x: usize) -> &ElementaryValuation<R> {
        &self.table[x]
    }

    /// Whether monotonicity was verified rather than declared.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    /// Kleisli composite `x ↦ g†(f(x))`.
    pub fn then(&self, g: &Kernel<R>) -> Result<Kernel<R>> {
        self.target.ensure_same(&g.source)?;
        let table = self.table.iter().map(|nu| bind(g, nu)).collect::<Result<Vec<_>>>()?;
        Ok(Kernel {
            source: self.source.clone(),
            target: g.target.clone(),
            table,
            checked: self.checked && g.checked,
        })
    }
}

/// A monotone map between the points of two finite posets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointMap {
    source: FinitePoset,
    target: FinitePoset,
    table: Vec<usize>,
}

impl PointMap {
    pub fn new(source: FinitePoset, target: FinitePoset, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::NotTotal(format!("{} images for {} points", table.len(), source.len())));
        }
        for &y in &table {
            target.check_point(y)?;
        }
        if let Some((a, b)) = source.strict_pairs().find(|&(a, b)| !target.leq(table[a], table[b])) {
            return Err(Error::NotMonotone(format!(
                "{} <= {} but {} is not below {}",
                source.name(a),
                source.name(b),
                target.name(table[a]),
                target.name(table[b])
            )));
        }
        Ok(PointMap { source, target, table })
    }

    pub fn identity(space: FinitePoset) -> Self {
        let table = space.points().collect();
        PointMap {
            source: space.clone(),
            target: space,
            table,
        }
    }

    pub fn constant(source: FinitePoset, target: FinitePoset, y: usize) -> Result<Self> {
        target.check_point(y)?;
        let table = vec![y; source.len()];
        Ok(PointMap { source, target, table })
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `self × id_Y` on `source × Y`.
    pub fn times_identity(&self, y: &FinitePoset) -> PointMap {
        let m = y.len();
        let table = (0..self.source.len() * m)
            .map(|k| self.table[k / m] * m + k % m)
            .collect();
        PointMap {
            source: self.source.product(y),
            target: self.target.product(y),
            table,
        }
    }
}

/// `η_X(x) = δ_x`.
pub fn unit<R: DRag>(space: &FinitePoset, x: usize) -> Result<ElementaryValuation<R>> {
    ElementaryValuation::dirac(space.clone(), x)
}

/// `f†(Σ r_i × δ_{x_i}) = Σ r_i × f(x_i)`.
pub fn bind<R: DRag>(f: &Kernel<R>, nu: &ElementaryValuation<R>) -> Result<ElementaryValuation<R>> {
    nu.space().ensure_same(&f.source)?;
    let terms = nu
        .terms()
        .iter()
        .flat_map(|(r, x)| f.table[*x].terms().iter().map(move |(s, y)| (r.mul(s), *y)))
        .collect();
    Ok(ElementaryValuation::normalized(f.target.clone(), terms))
}

/// `f†(ν)(k) = ν(λx. f(x)(k))`, straight from the definition.
pub fn bind_functional<R: DRag>(f: &Kernel<R>, nu: &ElementaryValuation<R>, k: &MonotoneMap<R>) -> Result<R> {
    nu.space().ensure_same(&f.source)?;
    f.target.ensure_same(k.domain())?;
    let inner = f
        .table
        .iter()
        .map(|image| image.evaluate(k))
        .collect::<Result<Vec<R>>>()?;
    Ok(nu.evaluate_with(|x| inner[x].clone()))
}

/// Image valuation along a monotone point map: `Σ r_i × δ_{g(x_i)}`.
pub fn map<R: DRag>(g: &PointMap, nu: &ElementaryValuation<R>) -> Result<ElementaryValuation<R>> {
    nu.space().ensure_same(&g.source)?;
    let terms = nu.terms().iter().map(|(r, x)| (r.clone(), g.table[*x])).collect();
    Ok(ElementaryValuation::normalized(g.target.clone(), terms))
}

/// Index of `(x, y)` in `x_space × y_space`.
pub fn pair_index(y_space: &FinitePoset, x: usize, y: usize) -> usize {
    x * y_space.len() + y
}

/// `t(x, ν) = Σ r_i × δ_{(x, y_i)}` on `x_space × ν.space`.
pub fn strength<R: DRag>(x_space: &FinitePoset, x: usize, nu: &ElementaryValuation<R>) -> Result<ElementaryValuation<R>> {
    x_space.check_point(x)?;
    let y_space = nu.space();
    let terms = nu
        .terms()
        .iter()
        .map(|(r, y)| (r.clone(), pair_index(y_space, x, *y)))
        .collect();
    Ok(ElementaryValuation::normalized(x_space.product(y_space), terms))
}

/// `t'(μ, y) = Σ r_i × δ_{(x_i, y)}` on `μ.space × y_space`.
pub fn dual_strength<R: DRag>(mu: &ElementaryValuation<R>, y_space: &FinitePoset, y: usize) -> Result<ElementaryValuation<R>> {
    y_space.check_point(y)?;
    let terms = mu
        .terms()
        .iter()
        .map(|(r, x)| (r.clone(), pair_index(y_space, *x, y)))
        .collect();
    Ok(ElementaryValuation::normalized(mu.space().product(y_space), terms))
}

/// Fubini product `Σ_i Σ_j (r_i × s_j) × δ_{(x_i, y_j)}`.
pub fn product<R: DRag>(mu: &ElementaryValuation<R>, nu: &ElementaryValuation<R>) -> ElementaryValuation<R> {
    let y_space = nu.space();
    let terms = mu
        .terms()
        .iter()
        .flat_map(|(r, x)| {
            nu.terms()
                .iter()
                .map(move |(s, y)| (r.mul(s), pair_index(y_space, *x, *y)))
        })
        .collect();
    ElementaryValuation::normalized(mu.space().product(y_space), terms)
}

/// `μ(λx. ν(λy. k(x, y)))`.
pub fn iterated_x_outer<R: DRag>(mu: &ElementaryValuation<R>, nu: &ElementaryValuation<R>, k: &MonotoneMap<R>) -> Result<R> {
    let y_space = nu.space();
    mu.space().product(y_space).ensure_same(k.domain())?;
    let inner: Vec<R> = mu
        .space()
        .points()
        .map(|x| nu.evaluate_with(|y| k.at(pair_index(y_space, x, y)).clone()))
        .collect();
    Ok(mu.evaluate_with(|x| inner[x].clone()))
}

/// `ν(λy. μ(λx. k(x, y)))`.
pub fn iterated_y_outer<R: DRag>(mu: &ElementaryValuation<R>, nu: &ElementaryValuation<R>, k: &MonotoneMap<R>) -> Result<R> {
    let y_space = nu.space();
    mu.space().product(y_space).ensure_same(k.domain())?;
    let inner: Vec<R> = y_space
        .points()
        .map(|y| mu.evaluate_with(|x| k.at(pair_index(y_space, x, y)).clone()))
        .collect();
    Ok(nu.evaluate_with(|y| inner[y].clone()))
}

/// The partial map `y ↦ k(x, y)` as a test function on `y_space`.
pub fn section_at_x<R: DRag>(k: &MonotoneMap<R>, y_space: &FinitePoset, x: usize) -> MonotoneMap<R> {
    let table = y_space.points().map(|y| k.at(pair_index(y_space, x, y)).clone()).collect();
    MonotoneMap::from_monotone_table(y_space.clone(), table)
}

/// Applies `bind` along an ascending chain, element by element.
pub fn bind_chain<R: DRag>(f: &Kernel<R>, chain: &[ElementaryValuation<R>]) -> Result<Vec<ElementaryValuation<R>>> {
    chain.iter().map(|nu| bind(f, nu)).collect()
}

/// Products of two chains taken along the diagonal.
pub fn product_chain<R: DRag>(mus: &[ElementaryValuation<R>], nus: &[ElementaryValuation<R>]) -> Vec<ElementaryValuation<R>> {
    mus.iter().zip(nus).map(|(mu, nu)| product(mu, nu)).collect()
}
