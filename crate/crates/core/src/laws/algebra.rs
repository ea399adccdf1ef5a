//! d-rag axioms, monad laws, strength and Fubini.

use std::fmt::Display;

use rand::Rng;

use super::gen::{self, Rng8, Sample};
use super::{check, lift, CaseResult, Ctx};
use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::monad::{
    bind_functional, dual_strength, iterated_x_outer, iterated_y_outer, map, pair_index, product, strength, unit, Kernel, PointMap,
};
use crate::spaces::{FinitePoset, MonotoneMap};
use crate::valuation::ElementaryValuation;

fn iv(s: &str) -> IntervalValue {
    s.parse().expect("literal")
}

/// The grid whose full cross product is checked for the d-rag axioms.
fn axiom_grid() -> Vec<IntervalValue> {
    ["[0,0]", "[1,1]", "[1/2,2]", "[0,inf]", "[inf,inf]", "[3,3]"].iter().map(|s| iv(s)).collect()
}

/// Coefficients for the exhaustive monad-law sweep.
fn monad_grid() -> Vec<IntervalValue> {
    ["[0,0]", "[1,1]", "[1/2,1/2]", "[1,2]", "[0,inf]"].iter().map(|s| iv(s)).collect()
}

fn drag_laws<R: DRag + Display>(x: &R, y: &R, z: &R, mul: &dyn Fn(&R, &R) -> R) -> CaseResult {
    let show = || format!("x = {x}, y = {y}, z = {z}");
    check(x.add(y).add(z) == x.add(&y.add(z)), "+ associative", show)?;
    check(x.add(y) == y.add(x), "+ commutative", show)?;
    check(x.add(&R::zero()) == *x, "+ unit", show)?;
    check(mul(&mul(x, y), z) == mul(x, &mul(y, z)), "× associative", show)?;
    check(mul(x, y) == mul(y, x), "× commutative", show)?;
    check(mul(x, &R::one()) == *x, "× unit", show)?;
    check(mul(x, &y.add(z)) == mul(x, y).add(&mul(x, z)), "× distributes over +", show)?;
    check(mul(&R::bottom(), x) == R::bottom(), "bottom absorbs ×", show)?;
    if x.leq(y) {
        check(x.add(z).leq(&y.add(z)), "+ monotone", show)?;
        check(mul(x, z).leq(&mul(y, z)), "× monotone", show)?;
    }
    Ok(())
}

fn interval_laws(ctx: &Ctx, x: &IntervalValue, y: &IntervalValue, z: &IntervalValue) -> CaseResult {
    drag_laws(x, y, z, &|a, b| ctx.imul(a, b))?;
    let absorbed = IntervalValue::new(x.lo().clone(), ExtNonNeg::Infinity).expect("lo <= inf");
    check(IntervalValue::bottom().add(x) == absorbed, "partial absorption", || format!("x = {x}"))
}

fn endpoint_products(a: &ExtNonNeg, b: &ExtNonNeg) -> CaseResult {
    let (l, r) = (a.mul_left(b), a.mul_right(b));
    let edge = (a.is_zero() && b.is_infinite()) || (a.is_infinite() && b.is_zero());
    check(l <= r, "·ℓ below ·r", || format!("a = {a}, b = {b}"))?;
    check(edge || l == r, "·ℓ and ·r agree off 0·inf", || format!("a = {a}, b = {b}"))
}

pub(crate) fn drag_exhaustive(ctx: &Ctx) -> (usize, CaseResult) {
    let grid = axiom_grid();
    let scalars: Vec<ExtNonNeg> = ["0", "1", "1/2", "2", "inf", "3"].iter().map(|s| s.parse().expect("literal")).collect();
    let mut n = 0;
    for x in &grid {
        for y in &grid {
            for z in &grid {
                n += 1;
                if let Err(v) = interval_laws(ctx, x, y, z) {
                    return (n, Err(v));
                }
            }
        }
    }
    for a in &scalars {
        for b in &scalars {
            if let Err(v) = endpoint_products(a, b) {
                return (n, Err(v));
            }
            for c in &scalars {
                n += 1;
                if let Err(v) = drag_laws(a, b, c, &|p, q| p.mul(q)) {
                    return (n, Err(v));
                }
            }
        }
    }
    (n, Ok(()))
}

pub(crate) fn drag_case(ctx: &Ctx, rng: &mut Rng8, _size: usize) -> CaseResult {
    let x = IntervalValue::sample(rng);
    let y = if rng.gen_bool(0.3) { IntervalValue::sample_above(rng, &[&x]) } else { IntervalValue::sample(rng) };
    let z = IntervalValue::sample(rng);
    interval_laws(ctx, &x, &y, &z)?;
    let a = ExtNonNeg::sample(rng);
    let b = if rng.gen_bool(0.3) { ExtNonNeg::sample_above(rng, &[&a]) } else { ExtNonNeg::sample(rng) };
    let c = ExtNonNeg::sample(rng);
    endpoint_products(&a, &b)?;
    drag_laws(&a, &b, &c, &|p, q| p.mul(q))
}

/// Every valuation `Σ_x c_x × δ_x` with each point either absent or carrying
/// a grid coefficient.
fn grid_valuations<R: DRag>(space: &FinitePoset, grid: &[R]) -> Vec<ElementaryValuation<R>> {
    let choices = grid.len() + 1;
    let total = choices.pow(space.len() as u32);
    (1..total)
        .map(|mut code| {
            let mut terms = Vec::new();
            for x in space.points() {
                let c = code % choices;
                code /= choices;
                if c > 0 {
                    terms.push((grid[c - 1].clone(), x));
                }
            }
            ElementaryValuation::new(space.clone(), terms).expect("non-empty")
        })
        .collect()
}

/// Kernels `x ↦ c × δ_{φ(x)}` for grid coefficients `c` and all monotone
/// point maps `φ`.
fn grid_kernels<R: DRag>(source: &FinitePoset, target: &FinitePoset, grid: &[R]) -> Vec<Kernel<R>> {
    let maps = source.monotone_point_maps(target);
    let mut out = Vec::with_capacity(maps.len() * grid.len());
    for phi in &maps {
        for c in grid {
            let table = phi
                .iter()
                .map(|&y| ElementaryValuation::new(target.clone(), vec![(c.clone(), y)]).expect("point in target"))
                .collect();
            out.push(Kernel::declared(source.clone(), target.clone(), table).expect("total"));
        }
    }
    out
}

fn same_on<R: DRag + Display>(
    lhs: &ElementaryValuation<R>,
    rhs: impl Fn(&MonotoneMap<R>) -> R,
    tests: &[MonotoneMap<R>],
    law: &'static str,
) -> CaseResult {
    for k in tests {
        let l = lift(lhs.evaluate(k), law)?;
        let r = rhs(k);
        check(l == r, law, || format!("at k = {k}: {l} vs {r}; lhs = {lhs}"))?;
    }
    Ok(())
}

fn law_unit_left<R: DRag + Display>(ctx: &Ctx, f: &Kernel<R>, x: usize, tests: &[MonotoneMap<R>]) -> CaseResult {
    let lhs = lift(ctx.bind(f, &lift(unit(f.source(), x), "unit")?), "left unit law")?;
    check(lhs == *f.at(x), "left unit law", || format!("f†(δ_{x}) = {lhs}, f({x}) = {}", f.at(x)))?;
    same_on(&lhs, |k| f.at(x).evaluate(k).expect("same space"), tests, "left unit law (functional)")
}

fn law_unit_right<R: DRag + Display>(ctx: &Ctx, nu: &ElementaryValuation<R>, tests: &[MonotoneMap<R>]) -> CaseResult {
    let eta = Kernel::unit(nu.space().clone());
    let lhs = lift(ctx.bind(&eta, nu), "right unit law")?;
    check(lhs == *nu, "right unit law", || format!("η†(ν) = {lhs}, ν = {nu}"))?;
    same_on(&lhs, |k| nu.evaluate(k).expect("same space"), tests, "right unit law (functional)")
}

fn law_assoc<R: DRag + Display>(
    ctx: &Ctx,
    f: &Kernel<R>,
    g: &Kernel<R>,
    nu: &ElementaryValuation<R>,
    tests: &[MonotoneMap<R>],
) -> CaseResult {
    let law = "associativity law";
    let lhs = lift(ctx.bind(g, &lift(ctx.bind(f, nu), law)?), law)?;
    let composite = lift(f.then(g), law)?;
    let rhs = lift(ctx.bind(&composite, nu), law)?;
    check(lhs == rhs, law, || format!("ν = {nu}: g†(f†ν) = {lhs}, (g†∘f)†ν = {rhs}"))?;
    let nested = |k: &MonotoneMap<R>| {
        let inner: Vec<R> = f
            .source()
            .points()
            .map(|x| bind_functional(g, f.at(x), k).expect("same space"))
            .collect();
        nu.evaluate_with(|x| inner[x].clone())
    };
    same_on(&lhs, nested, tests, "associativity law (functional)")
}

/// Law (iii) for Dirac valuations, checked structurally only.
fn law_assoc_structural(ctx: &Ctx, f: &Kernel<IntervalValue>, g: &Kernel<IntervalValue>, x: usize) -> CaseResult {
    let law = "associativity law";
    let nu = lift(unit(f.source(), x), law)?;
    let lhs = lift(ctx.bind(g, &lift(ctx.bind(f, &nu), law)?), law)?;
    let rhs = lift(ctx.bind(&lift(f.then(g), law)?, &nu), law)?;
    check(lhs == rhs, law, || format!("ν = {nu}: g†(f†ν) = {lhs}, (g†∘f)†ν = {rhs}"))
}

/// The exhaustive sweep over posets with at most three points, the
/// five-element coefficient grid and the kernels `x ↦ c × δ_{φ(x)}`.
///
/// Laws (i) and (ii) cover every poset, grid valuation and grid kernel,
/// structurally and on the exhaustive test family. Law (iii) covers every
/// triple of posets with at most two points the same way. Triples involving
/// a three-point poset are checked structurally on Dirac valuations, which
/// keeps the sweep near twenty seconds.
pub(crate) fn monad_exhaustive(ctx: &Ctx) -> (usize, CaseResult) {
    let grid = monad_grid();
    let posets: Vec<FinitePoset> = (1..=3).flat_map(FinitePoset::all_up_to_iso).collect();
    let tests: Vec<Vec<MonotoneMap<IntervalValue>>> = posets.iter().map(|p| p.monotone_maps(&grid)).collect();
    let valuations: Vec<Vec<ElementaryValuation<IntervalValue>>> = posets.iter().map(|p| grid_valuations(p, &grid)).collect();
    let kernels: Vec<Vec<Vec<Kernel<IntervalValue>>>> = posets
        .iter()
        .map(|x| posets.iter().map(|y| grid_kernels(x, y, &grid)).collect())
        .collect();
    let mut n = 0;
    let mut run = |r: CaseResult| -> CaseResult {
        n += 1;
        r
    };
    let result = (|| {
        for (xi, x) in posets.iter().enumerate() {
            for nu in &valuations[xi] {
                run(law_unit_right(ctx, nu, &tests[xi]))?;
            }
            for (yi, fs) in kernels[xi].iter().enumerate() {
                for f in fs {
                    for p in x.points() {
                        run(law_unit_left(ctx, f, p, &tests[yi]))?;
                    }
                }
            }
        }
        for (xi, x) in posets.iter().enumerate() {
            for (yi, y) in posets.iter().enumerate() {
                for (zi, z) in posets.iter().enumerate() {
                    let full = x.len() < 3 && y.len() < 3 && z.len() < 3;
                    for f in &kernels[xi][yi] {
                        for g in &kernels[yi][zi] {
                            if full {
                                for nu in &valuations[xi] {
                                    run(law_assoc(ctx, f, g, nu, &tests[zi]))?;
                                }
                            } else {
                                for p in x.points() {
                                    run(law_assoc_structural(ctx, f, g, p))?;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    (n, result)
}

fn sample_tests<R: Sample>(rng: &mut Rng8, space: &FinitePoset, count: usize) -> Vec<MonotoneMap<R>> {
    (0..count).map(|_| gen::monotone_map(rng, space)).collect()
}

fn monad_instance<R: Sample + Display>(ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let x = gen::poset(rng, size);
    let y = gen::poset(rng, size);
    let z = gen::poset(rng, size);
    let f: Kernel<R> = gen::kernel(rng, &x, &y, 3);
    let g: Kernel<R> = gen::kernel(rng, &y, &z, 3);
    let nu: ElementaryValuation<R> = gen::valuation(rng, &x, 4);
    let tests_x = sample_tests(rng, &x, 6);
    let tests_y = sample_tests(rng, &y, 6);
    let tests_z = sample_tests(rng, &z, 6);
    let p = rng.gen_range(0..x.len());
    law_unit_left(ctx, &f, p, &tests_y)?;
    law_unit_right(ctx, &nu, &tests_x)?;
    law_assoc(ctx, &f, &g, &nu, &tests_z)?;

    // the functor is bind of the unit after a point map
    let phi = gen::point_map(rng, &x, &y);
    let mapped = lift(map(&phi, &nu), "map via bind")?;
    let via_bind = lift(ctx.bind(&Kernel::from_point_map(&phi), &nu), "map via bind")?;
    check(mapped == via_bind, "map via bind", || format!("ν = {nu}: {mapped} vs {via_bind}"))?;
    let psi = gen::point_map(rng, &y, &z);
    let composed = PointMap::new(x.clone(), z.clone(), x.points().map(|p| psi.apply(phi.apply(p))).collect())
        .expect("composite of monotone maps");
    let twice = lift(map(&psi, &mapped), "map composes")?;
    let once = lift(map(&composed, &nu), "map composes")?;
    check(twice == once, "map composes", || format!("ν = {nu}: {twice} vs {once}"))
}

pub(crate) fn monad_case(ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    if rng.gen_bool(0.75) {
        monad_instance::<IntervalValue>(ctx, rng, size)
    } else {
        monad_instance::<ExtNonNeg>(ctx, rng, size)
    }
}

fn strength_instance<R: Sample + Display>(ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let xs = gen::poset(rng, size);
    let ys = gen::poset(rng, size);
    let xy = xs.product(&ys);
    let x = rng.gen_range(0..xs.len());
    let y = rng.gen_range(0..ys.len());
    let nu: ElementaryValuation<R> = gen::valuation(rng, &ys, 4);
    let mu: ElementaryValuation<R> = gen::valuation(rng, &xs, 4);
    let h: MonotoneMap<R> = gen::monotone_map(rng, &xy);

    let t = lift(strength(&xs, x, &nu), "strength identity")?;
    let lhs = lift(t.evaluate(&h), "strength identity")?;
    let rhs = nu.evaluate_with(|q| h.at(pair_index(&ys, x, q)).clone());
    check(lhs == rhs, "strength identity", || format!("x = {x}, ν = {nu}, h = {h}: {lhs} vs {rhs}"))?;

    let t2 = lift(dual_strength(&mu, &ys, y), "dual strength identity")?;
    let lhs = lift(t2.evaluate(&h), "dual strength identity")?;
    let rhs = mu.evaluate_with(|p| h.at(pair_index(&ys, p, y)).clone());
    check(lhs == rhs, "dual strength identity", || format!("μ = {mu}, y = {y}, h = {h}: {lhs} vs {rhs}"))?;

    let dirac = lift(strength(&xs, x, &lift(unit::<R>(&ys, y), "strength of a unit")?), "strength of a unit")?;
    let expected = lift(unit(&xy, pair_index(&ys, x, y)), "strength of a unit")?;
    check(dirac == expected, "strength of a unit", || format!("{dirac} vs {expected}"))?;

    // naturality in the first argument
    let x2 = gen::poset(rng, size);
    let g = gen::point_map(rng, &xs, &x2);
    let moved = lift(map(&g.times_identity(&ys), &t), "strength naturality")?;
    let direct = lift(strength(&x2, g.apply(x), &nu), "strength naturality")?;
    check(moved == direct, "strength naturality", || format!("x = {x}, ν = {nu}: {moved} vs {direct}"))?;

    // t(x, f†ν) = (y ↦ t(x, f(y)))†ν
    let zs = gen::poset(rng, size);
    let f: Kernel<R> = gen::kernel(rng, &ys, &zs, 3);
    let lhs = lift(strength(&xs, x, &lift(ctx.bind(&f, &nu), "strength commutes with bind")?), "strength commutes with bind")?;
    let table = ys
        .points()
        .map(|q| strength(&xs, x, f.at(q)))
        .collect::<crate::error::Result<Vec<_>>>();
    let lifted = lift(table.and_then(|t| Kernel::declared(ys.clone(), xs.product(&zs), t)), "strength commutes with bind")?;
    let rhs = lift(ctx.bind(&lifted, &nu), "strength commutes with bind")?;
    check(lhs == rhs, "strength commutes with bind", || format!("x = {x}, ν = {nu}: {lhs} vs {rhs}"))
}

pub(crate) fn strength_case(ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    if rng.gen_bool(0.75) {
        strength_instance::<IntervalValue>(ctx, rng, size)
    } else {
        strength_instance::<ExtNonNeg>(ctx, rng, size)
    }
}

fn fubini_instance<R: Sample + Display>(rng: &mut Rng8, size: usize) -> CaseResult {
    let xs = gen::poset(rng, size);
    let ys = gen::poset(rng, size);
    let mu: ElementaryValuation<R> = gen::valuation(rng, &xs, 4);
    let nu: ElementaryValuation<R> = gen::valuation(rng, &ys, 4);
    let k: MonotoneMap<R> = gen::monotone_map(rng, &xs.product(&ys));
    let law = "Fubini exchange";
    let a = lift(iterated_x_outer(&mu, &nu, &k), law)?;
    let b = lift(iterated_y_outer(&mu, &nu, &k), law)?;
    let c = lift(product(&mu, &nu).evaluate(&k), law)?;
    check(a == b && b == c, law, || format!("μ = {mu}, ν = {nu}, k = {k}: x outer {a}, y outer {b}, product {c}"))
}

pub(crate) fn fubini_case(_ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    fubini_instance::<IntervalValue>(rng, size)?;
    fubini_instance::<ExtNonNeg>(rng, size)
}
