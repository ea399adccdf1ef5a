//! Integral identities: Choquet oracle, lower/upper integral algebra, `rval`,
//! the view from the left and the dyadic Lebesgue chain.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::gen::{self, Rng8, Sample};
use super::{approximates, check, lift, CaseResult, Ctx, Violation};
use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::lebesgue::{fixtures, Lebesgue};
use crate::measure::{
    choquet_integral, is_mu_bounded, least_extension, lower_integral, pushforward, rval_evaluate, upper_integral, view_from_left,
    FiniteSupportMeasure, IntervalFunctional, Rval,
};
use crate::spaces::{endpoint_maps, MonotoneMap, PointFn};
use crate::valuation::ElementaryValuation;

pub(crate) fn choquet_case(_ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let space = gen::poset(rng, size);
    let f = gen::point_fn(rng, &space, true);
    let mu = gen::measure(rng, &space, true, false);
    let law = "lower integral equals Choquet sum";
    let a = lift(lower_integral(&f, &mu), law)?;
    let b = lift(choquet_integral(&f, &mu), law)?;
    check(a == b, law, || format!("f = {:?}, μ = {mu}: {a} vs {b}", show(&f)))
}

fn show(f: &PointFn) -> Vec<String> {
    f.values().iter().map(ToString::to_string).collect()
}

/// `0`, `inf` or a random scalar, each edge case a quarter of the time.
fn scalar(rng: &mut Rng8) -> ExtNonNeg {
    match rng.gen_range(0..4) {
        0 => ExtNonNeg::zero(),
        1 => ExtNonNeg::Infinity,
        _ => gen::ext(rng, false),
    }
}

fn add_fns(f: &PointFn, g: &PointFn) -> PointFn {
    f.zip_with(g, |a, b| a.add(b)).expect("same space")
}

pub(crate) fn integral_case(_ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let space = gen::poset(rng, size);

    // lower integral: additive and ·ℓ-homogeneous for any μ
    let mu = gen::measure(rng, &space, true, false);
    let f = gen::point_fn(rng, &space, true);
    let g = gen::point_fn(rng, &space, true);
    let a = scalar(rng);
    let lower = |h: &PointFn, law| lift(lower_integral(h, &mu), law);
    let law = "lower integral additive";
    let (sum, parts) = (lower(&add_fns(&f, &g), law)?, lower(&f, law)?.add(&lower(&g, law)?));
    check(sum == parts, law, || format!("f = {:?}, g = {:?}, μ = {mu}: {sum} vs {parts}", show(&f), show(&g)))?;
    let law = "lower integral ·ℓ-homogeneous";
    let (scaled, outer) = (lower(&f.map(|v| a.mul_left(v)), law)?, a.mul_left(&lower(&f, law)?));
    check(scaled == outer, law, || format!("a = {a}, f = {:?}, μ = {mu}: {scaled} vs {outer}", show(&f)))?;

    // upper integral: antitone integrands, non-zero bounded μ
    let mu = gen::measure(rng, &space, false, true);
    let f = gen::antitone_fn(rng, &space, true);
    let g = gen::antitone_fn(rng, &space, true);
    let a = scalar(rng);
    let upper = |h: &PointFn, law| lift(upper_integral(h, &mu), law);
    let law = "upper integral additive";
    let (sum, parts) = (upper(&add_fns(&f, &g), law)?, upper(&f, law)?.add(&upper(&g, law)?));
    check(sum == parts, law, || format!("f = {:?}, g = {:?}, μ = {mu}: {sum} vs {parts}", show(&f), show(&g)))?;
    let law = "upper integral ·r-homogeneous";
    let (scaled, outer) = (upper(&f.map(|v| a.mul_right(v)), law)?, a.mul_right(&upper(&f, law)?));
    check(scaled == outer, law, || format!("a = {a}, f = {:?}, μ = {mu}: {scaled} vs {outer}", show(&f)))?;

    // domination on the support region
    let law = "upper integral above lower integral";
    let region = lift(is_mu_bounded(&f, &mu), law)?.region;
    let dominated: Vec<ExtNonNeg> = space
        .points()
        .map(|x| {
            if region.contains(&x) {
                gen::between(rng, &ExtNonNeg::zero(), f.at(x))
            } else {
                gen::ext(rng, true)
            }
        })
        .collect();
    let dominated = PointFn::new(space.clone(), dominated).expect("total");
    let (hi, lo) = (upper(&f, law)?, lift(lower_integral(&dominated, &mu), law)?);
    check(lo <= hi, law, || format!("f = {:?}, g = {:?}, μ = {mu}: ∫⁺f = {hi}, ∫⁻g = {lo}", show(&f), show(&dominated)))?;

    // descending antitone chain
    let law = "upper integral cocontinuous on chains";
    let mut chain = vec![f.clone()];
    for _ in 0..rng.gen_range(1..=4) {
        let next = gen::antitone_fn(rng, &space, true);
        let last = chain.last().expect("non-empty").clone();
        chain.push(last.zip_with(&next, |p, q| p.clone().min(q.clone())).expect("same space"));
    }
    let infimum = chain
        .iter()
        .skip(1)
        .fold(chain[0].clone(), |acc, h| acc.zip_with(h, |p, q| p.clone().min(q.clone())).expect("same space"));
    let values = chain.iter().map(|h| upper(h, law)).collect::<Result<Vec<_>, Violation>>()?;
    let least = values.iter().min().expect("non-empty").clone();
    let at_inf = upper(&infimum, law)?;
    check(at_inf == least, law, || format!("μ = {mu}: ∫⁺ inf = {at_inf}, inf ∫⁺ = {least}"))?;

    // change of variables along a monotone map
    let target = gen::poset(rng, size);
    let phi = gen::point_map(rng, &space, &target);
    let mu = gen::measure(rng, &space, true, false);
    let h = gen::point_fn(rng, &target, true);
    let law = "lower integral change of variables";
    let image = lift(pushforward(&phi, &mu), law)?;
    let (lhs, rhs) = (
        lift(lower_integral(&h, &image), law)?,
        lift(lower_integral(&h.compose(&space, phi.table()), &mu), law)?,
    );
    check(lhs == rhs, law, || format!("h = {:?}, μ = {mu}: {lhs} vs {rhs}", show(&h)))?;
    if !mu.is_zero() && mu.is_bounded() {
        let h = gen::antitone_fn(rng, &target, true);
        let law = "upper integral change of variables";
        let (lhs, rhs) = (
            lift(upper_integral(&h, &image), law)?,
            lift(upper_integral(&h.compose(&space, phi.table()), &mu), law)?,
        );
        check(lhs == rhs, law, || format!("h = {:?}, μ = {mu}: {lhs} vs {rhs}", show(&h)))?;
    }
    Ok(())
}

/// A table between the endpoint maps of `h`.
fn between_endpoints(rng: &mut Rng8, h: &MonotoneMap<IntervalValue>) -> PointFn {
    let values = h.table().iter().map(|v| gen::between(rng, v.lo(), v.hi())).collect();
    PointFn::new(h.domain().clone(), values).expect("total")
}

/// Whether `ν(h)` contains `∫⁻ f dμ` for every `h` in `tests` and every `f`
/// between `h⁻` and `h⁺`. The extremes decide, since `∫⁻` is monotone.
fn approximates_on(nu: &ElementaryValuation<IntervalValue>, mu: &FiniteSupportMeasure, tests: &[MonotoneMap<IntervalValue>]) -> bool {
    tests.iter().all(|h| {
        let v = nu.evaluate(h).expect("same space");
        let (lo, hi) = endpoint_maps(h);
        approximates(&v, &lower_integral(&lo, mu).expect("same space"))
            && approximates(&v, &lower_integral(&hi, mu).expect("same space"))
    })
}

/// `Σ_x [a_x, b_x] δ_x` with `a_x ≤ μ{x} ≤ b_x`, which approximates `μ`.
fn approximant(rng: &mut Rng8, mu: &FiniteSupportMeasure) -> ElementaryValuation<IntervalValue> {
    let mut terms = Vec::new();
    for x in mu.space().points() {
        let m = mu.mass(x);
        if m.is_zero() && rng.gen_bool(0.5) {
            continue;
        }
        let a = gen::between(rng, &ExtNonNeg::zero(), m);
        let b = gen::between(rng, m, &ExtNonNeg::Infinity);
        terms.push((IntervalValue::new(a, b).expect("a <= b"), x));
    }
    if terms.is_empty() {
        terms.push((IntervalValue::bottom(), 0));
    }
    ElementaryValuation::new(mu.space().clone(), terms).expect("points in space")
}

pub(crate) fn rval_case(ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let space = gen::poset(rng, size);
    let mu = gen::measure(rng, &space, false, true);
    let rval = |h: &MonotoneMap<IntervalValue>, law| lift(rval_evaluate(&mu, h), law);
    let h: MonotoneMap<IntervalValue> = gen::monotone_map(rng, &space);
    let k: MonotoneMap<IntervalValue> = gen::monotone_map(rng, &space);
    let a = IntervalValue::sample(rng);

    let law = "rval additive";
    let (sum, parts) = (rval(&h.add(&k).expect("same space"), law)?, rval(&h, law)?.add(&rval(&k, law)?));
    check(sum == parts, law, || format!("μ = {mu}, h = {h}, k = {k}: {sum} vs {parts}"))?;

    let law = "rval homogeneous";
    let scaled_h = MonotoneMap::tabulate(space.clone(), |x| ctx.imul(&a, h.at(x)));
    let scaled_h = lift(scaled_h, law)?;
    let (scaled, outer) = (rval(&scaled_h, law)?, ctx.imul(&a, &rval(&h, law)?));
    check(scaled == outer, law, || format!("a = {a}, μ = {mu}, h = {h}: {scaled} vs {outer}"))?;

    let law = "rval monotone";
    let above = gen::monotone_map_above(rng, &h);
    let (low, high) = (rval(&h, law)?, rval(&above, law)?);
    check(low.leq(&high), law, || format!("μ = {mu}, h = {h} ⊑ {above}: {low} vs {high}"))?;

    let law = "rval approximates μ";
    let f = between_endpoints(rng, &h);
    let (v, integral) = (rval(&h, law)?, lift(lower_integral(&f, &mu), law)?);
    check(approximates(&v, &integral), law, || format!("μ = {mu}, h = {h}, f = {:?}: {integral} not in {v}", show(&f)))?;

    let law = "rval of a point mass";
    let q = rng.gen_range(0..space.len());
    let dirac = FiniteSupportMeasure::dirac(space.clone(), q).expect("point in space");
    let v = lift(rval_evaluate(&dirac, &h), law)?;
    check(v == *h.at(q), law, || format!("q = {q}, h = {h}: {v}"))?;

    // largest approximant, on a small space with its exhaustive test family
    let law = "rval is the largest approximant";
    let small = gen::poset(rng, size.min(3));
    let mu = gen::measure(rng, &small, false, true);
    let tests = small.monotone_maps(&<IntervalValue as DRag>::sample_grid());
    let nu = if rng.gen_bool(0.7) { approximant(rng, &mu) } else { gen::valuation(rng, &small, 3) };
    if approximates_on(&nu, &mu, &tests) {
        for t in &tests {
            let (v, r) = (lift(nu.evaluate(t), law)?, lift(rval_evaluate(&mu, t), law)?);
            check(v.leq(&r), law, || format!("μ = {mu}, ν = {nu}, h = {t}: {v} not below {r}"))?;
        }
    }
    Ok(())
}

/// An antitone table `g ≥ f` with `[f, g]` a monotone interval map.
fn upper_part(rng: &mut Rng8, f: &MonotoneMap<ExtNonNeg>) -> MonotoneMap<IntervalValue> {
    let space = f.domain();
    let n = space.len();
    let mut g = vec![ExtNonNeg::zero(); n];
    for x in (0..n).rev() {
        let floor = (x + 1..n)
            .filter(|&y| space.leq(x, y))
            .map(|y| g[y].clone())
            .fold(f.at(x).clone(), ExtNonNeg::max);
        g[x] = if rng.gen_bool(0.3) { floor } else { floor.add(&gen::ext(rng, true)) };
    }
    let table = space.points().map(|x| IntervalValue::new(f.at(x).clone(), g[x].clone()).expect("f <= g")).collect();
    MonotoneMap::new(space.clone(), table).expect("monotone by construction")
}

fn check_view<F: IntervalFunctional>(functional: &F, rng: &mut Rng8, f: &MonotoneMap<ExtNonNeg>, expected: &ExtNonNeg) -> CaseResult {
    let law = "view from the left ignores the upper part";
    let (h1, h2) = (upper_part(rng, f), upper_part(rng, f));
    let (a, b) = (lift(functional.apply(&h1), law)?, lift(functional.apply(&h2), law)?);
    check(a.lo() == b.lo(), law, || format!("[f, g₁] = {h1} gives {a}, [f, g₂] = {h2} gives {b}"))?;
    let law = "view from the left is the induced integral";
    let view = lift(view_from_left(functional, f), law)?;
    check(view == *a.lo() && view == *expected, law, || format!("f = {f}: view {view}, F⁻ {}, expected {expected}", a.lo()))
}

pub(crate) fn view_case(_ctx: &Ctx, rng: &mut Rng8, size: usize) -> CaseResult {
    let space = gen::poset(rng, size);
    let f: MonotoneMap<ExtNonNeg> = gen::monotone_map(rng, &space);

    let nu: ElementaryValuation<IntervalValue> = gen::valuation(rng, &space, 4);
    let expected = nu.terms().iter().fold(ExtNonNeg::zero(), |acc, (r, x)| acc.add(&r.lo().mul_left(f.at(*x))));
    check_view(&nu, rng, &f, &expected)?;

    let mu = gen::measure(rng, &space, false, true);
    let expected = lift(lower_integral(&PointFn::from(&f), &mu), "view of rval")?;
    check_view(&Rval(&mu), rng, &f, &expected)?;

    let law = "least extension round trip";
    let scalar: ElementaryValuation<ExtNonNeg> = gen::valuation(rng, &space, 4);
    let back = lift(view_from_left(&least_extension(scalar.clone()), &f), law)?;
    let direct = lift(scalar.evaluate(&f), law)?;
    check(back == direct, law, || format!("ν = {scalar}, f = {f}: {back} vs {direct}"))?;
    let any_mu = gen::measure(rng, &space, true, false);
    let back = lift(view_from_left(&least_extension(any_mu.clone()), &f), law)?;
    let direct = lift(lower_integral(&PointFn::from(&f), &any_mu), law)?;
    check(back == direct, law, || format!("μ = {any_mu}, f = {f}: {back} vs {direct}"))?;

    let law = "least extension below rval";
    let h: MonotoneMap<IntervalValue> = gen::monotone_map(rng, &space);
    let (least, full) = (lift(least_extension(mu.clone()).apply(&h), law)?, lift(rval_evaluate(&mu, &h), law)?);
    check(least.leq(&full), law, || format!("μ = {mu}, h = {h}: {least} vs {full}"))
}

fn pow2(n: u32) -> BigInt {
    BigInt::from(1) << n
}

fn point(v: BigRational) -> ExtNonNeg {
    ExtNonNeg::new(v).expect("non-negative")
}

/// `[(2ⁿ−1)/2ⁿ⁺¹, (2ⁿ+1)/2ⁿ⁺¹]`.
fn identity_closed_form(n: u32) -> IntervalValue {
    let p = pow2(n);
    let d = pow2(n + 1);
    IntervalValue::new(point(BigRational::new(&p - 1, d.clone())), point(BigRational::new(&p + 1, d))).expect("ordered")
}

/// `[(2ⁿ−1)(2ⁿ⁺¹−1)/(6·4ⁿ), (2ⁿ+1)(2ⁿ⁺¹+1)/(6·4ⁿ)]`.
fn square_closed_form(n: u32) -> IntervalValue {
    let (p, q) = (pow2(n), pow2(n + 1));
    let d = pow2(2 * n) * BigInt::from(6);
    let lo = BigRational::new((&p - 1) * (&q - 1), d.clone());
    let hi = BigRational::new((&p + 1) * (&q + 1), d);
    IntervalValue::new(point(lo), point(hi)).expect("ordered")
}

fn fail(law: &'static str, detail: String) -> Violation {
    Violation { law, detail }
}

/// Chain property and exact values of `ℓₙ` on the fixtures, up to `depth`.
pub(crate) fn lebesgue_chain(depth: u32) -> (usize, CaseResult) {
    let engine = Lebesgue::new();
    let mut n_checks = 0;
    let result = (|| {
        for (name, _, _) in fixtures::PIECEWISE {
            let h = fixtures::extension(name).expect("listed");
            n_checks += 1;
            let ok = lift(engine.chain_check(&h, depth), "Lebesgue chain ascends")?;
            check(ok, "Lebesgue chain ascends", || format!("fixture {name}, n ≤ {depth}"))?;
            for n in 0..=depth {
                n_checks += 1;
                let by_terms = lift(engine.lebesgue_n(n, &h), "endpoint sums agree")?;
                let by_endpoints = lift(engine.lebesgue_n_endpoints(n, &h), "endpoint sums agree")?;
                check(by_terms == by_endpoints, "endpoint sums agree", || {
                    format!("fixture {name}, n = {n}: {by_terms} vs {by_endpoints}")
                })?;
                let expected = match name {
                    "id" => Some(identity_closed_form(n)),
                    "square" => Some(square_closed_form(n)),
                    _ => None,
                };
                if let Some(expected) = expected {
                    check(by_terms == expected, "Lebesgue closed form", || {
                        format!("fixture {name}, n = {n}: {by_terms} vs {expected}")
                    })?;
                }
            }
        }
        let spike = fixtures::unbounded_at_half();
        for n in 0..=depth {
            n_checks += 1;
            let v = lift(engine.lebesgue_n(n, &spike), "unbounded upper part")?;
            if !v.hi().is_infinite() {
                return Err(fail("unbounded upper part", format!("n = {n}: {v}")));
            }
        }
        Ok(())
    })();
    (n_checks, result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_at_small_depth() {
        assert_eq!(identity_closed_form(0), "[0,1]".parse().unwrap());
        assert_eq!(identity_closed_form(1), "[1/4,3/4]".parse().unwrap());
        assert_eq!(square_closed_form(1), "[1/8,5/8]".parse().unwrap());
    }

}
