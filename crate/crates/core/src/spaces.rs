//! Finite posets as ground spaces.
//!
//! On a finite poset every directed set has a maximum, so Scott-continuous
//! maps are exactly the monotone ones, open sets are upper sets, closed sets
//! are lower sets and compact saturated sets are again upper sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::drag::{DRag, ExtNonNeg, IntervalValue};
use crate::error::{Error, Result};

/// Set of points, by index into the owning poset.
pub type PointSet = BTreeSet<usize>;

#[derive(Debug)]
struct PosetData {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // row-major n x n, leq[i * n + j] == (i <= j)
    leq: Vec<bool>,
}

/// A finite partially ordered set of named points.
///
/// Cloning is cheap; the underlying data is shared.
#[derive(Clone)]
pub struct FinitePoset(Arc<PosetData>);

impl FinitePoset {
    /// Builds a poset from an explicit order matrix, validating that it is
    /// reflexive, transitive and antisymmetric.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::NotAPartialOrder(format!("order matrix must be {n} x {n}")));
        }
        let flat: Vec<bool> = leq.into_iter().flatten().collect();
        Self::from_flat(names, flat)
    }

    /// Builds the least partial order containing the given `a <= b` pairs.
    pub fn from_relations<S: AsRef<str>>(names: &[S], relations: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        let n = names.len();
        let index = index_names(&names)?;
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in relations {
            let i = *index.get(a.as_ref()).ok_or_else(|| Error::PointNotInSpace(a.as_ref().to_owned()))?;
            let j = *index.get(b.as_ref()).ok_or_else(|| Error::PointNotInSpace(b.as_ref().to_owned()))?;
            leq[i * n + j] = true;
        }
        transitive_closure(&mut leq, n);
        Self::from_flat(names, leq)
    }

    fn from_flat(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        let index = index_names(&names)?;
        for i in 0..n {
            if !leq[i * n + i] {
                return Err(Error::NotAPartialOrder(format!("`{}` is not below itself", names[i])));
            }
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` and `{}` are below each other",
                        names[i], names[j]
                    )));
                }
                for k in 0..n {
                    if leq[i * n + j] && leq[j * n + k] && !leq[i * n + k] {
                        return Err(Error::NotAPartialOrder(format!(
                            "`{} <= {} <= {}` but not `{} <= {}`",
                            names[i], names[j], names[k], names[i], names[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset(Arc::new(PosetData { names, index, leq })))
    }

    /// `p0 < p1 < ... < p(n-1)`.
    pub fn chain(n: usize) -> Self {
        let names = default_names(n);
        let leq = (0..n).flat_map(|i| (0..n).map(move |j| i <= j)).collect();
        Self::from_flat(names, leq).expect("chain is a partial order")
    }

    /// `n` pairwise incomparable points.
    pub fn antichain(n: usize) -> Self {
        let names = default_names(n);
        let leq = (0..n).flat_map(|i| (0..n).map(move |j| i == j)).collect();
        Self::from_flat(names, leq).expect("antichain is a partial order")
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| Error::PointNotInSpace(name.to_owned()))
    }

    pub fn check_point(&self, i: usize) -> Result<usize> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(Error::PointNotInSpace(format!("#{i}")))
        }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.0.leq[i * self.len() + j]
    }

    /// Pairs `(i, j)` with `i <= j` and `i != j`.
    pub fn strict_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points()
            .cartesian_product(self.points())
            .filter(move |&(i, j)| i != j && self.leq(i, j))
    }

    pub fn same_space(&self, other: &FinitePoset) -> bool {
        self == other
    }

    pub fn ensure_same(&self, other: &FinitePoset) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Pointwise-ordered product. Point `(i, j)` has index `i * other.len() + j`
    /// and name `(a,b)`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let (n, m) = (self.len(), other.len());
        let names = self
            .points()
            .cartesian_product(other.points())
            .map(|(i, j)| format!("({},{})", self.name(i), other.name(j)))
            .collect();
        let mut leq = vec![false; n * m * n * m];
        for (a, b) in (0..n * m).cartesian_product(0..n * m) {
            leq[a * n * m + b] = self.leq(a / m, b / m) && other.leq(a % m, b % m);
        }
        Self::from_flat(names, leq).expect("product of partial orders is a partial order")
    }

    pub fn is_upper(&self, set: &PointSet) -> bool {
        set.iter().all(|&i| self.points().all(|j| !self.leq(i, j) || set.contains(&j)))
    }

    pub fn is_lower(&self, set: &PointSet) -> bool {
        set.iter().all(|&i| self.points().all(|j| !self.leq(j, i) || set.contains(&j)))
    }

    pub fn up_closure(&self, set: &PointSet) -> PointSet {
        self.points().filter(|&j| set.iter().any(|&i| self.leq(i, j))).collect()
    }

    pub fn down_closure(&self, set: &PointSet) -> PointSet {
        self.points().filter(|&j| set.iter().any(|&i| self.leq(j, i))).collect()
    }

    /// Points with nothing strictly above them.
    pub fn maximal_points(&self) -> PointSet {
        self.points()
            .filter(|&i| self.points().all(|j| i == j || !self.leq(i, j)))
            .collect()
    }

    /// Every monotone map from this poset into `grid`, ordered by `leq` of the
    /// d-rag. The count is at most `grid.len() ^ self.len()`.
    pub fn monotone_maps<R: DRag>(&self, grid: &[R]) -> Vec<MonotoneMap<R>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; n];
        self.extend_monotone(grid, 0, &mut choice, &mut out);
        out
    }

    fn extend_monotone<R: DRag>(&self, grid: &[R], k: usize, choice: &mut Vec<usize>, out: &mut Vec<MonotoneMap<R>>) {
        if k == self.len() {
            let table = choice.iter().map(|&c| grid[c].clone()).collect();
            out.push(MonotoneMap {
                domain: self.clone(),
                table,
            });
            return;
        }
        for c in 0..grid.len() {
            let ok = (0..k).all(|i| {
                (!self.leq(i, k) || grid[choice[i]].leq(&grid[c])) && (!self.leq(k, i) || grid[c].leq(&grid[choice[i]]))
            });
            if ok {
                choice[k] = c;
                self.extend_monotone(grid, k + 1, choice, out);
            }
        }
    }

    /// Every monotone map into `target`, as index tables.
    pub fn monotone_point_maps(&self, target: &FinitePoset) -> Vec<Vec<usize>> {
        if self.is_empty() {
            return vec![vec![]];
        }
        self.points()
            .map(|_| target.points())
            .multi_cartesian_product()
            .filter(|g| self.strict_pairs().all(|(i, j)| target.leq(g[i], g[j])))
            .collect()
    }

    /// All partial orders on `n` points up to isomorphism.
    pub fn all_up_to_iso(n: usize) -> Vec<FinitePoset> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
        let mut out = Vec::new();
        // Every finite poset has a linear extension, so it suffices to look at
        // relations that only go from lower to higher indices.
        for mask in 0u64..(1u64 << pairs.len()) {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    leq[i * n + j] = true;
                }
            }
            let mut closed = leq.clone();
            transitive_closure(&mut closed, n);
            if closed != leq {
                continue;
            }
            let canon = canonical_form(&leq, n);
            if seen.insert(canon) {
                out.push(Self::from_flat(default_names(n), leq).expect("closed relation"));
            }
        }
        out
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicatePoint(name.clone()));
        }
    }
    Ok(index)
}

fn transitive_closure(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if leq[i * n + k] {
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
    }
}

fn canonical_form(leq: &[bool], n: usize) -> Vec<bool> {
    (0..n)
        .permutations(n)
        .map(|p| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| leq[p[i] * n + p[j]])
                .collect::<Vec<bool>>()
        })
        .max()
        .unwrap_or_default()
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.names == other.0.names && self.0.leq == other.0.leq)
    }
}

impl Eq for FinitePoset {}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("poset {")?;
        let mut sep = " ";
        for name in self.names() {
            write!(f, "{sep}{name}")?;
            sep = "; ";
        }
        // Only the covering relation; the rest follows by transitivity.
        for (i, j) in self.strict_pairs() {
            let covered = self.points().all(|k| k == i || k == j || !(self.leq(i, k) && self.leq(k, j)));
            if covered {
                write!(f, "; {} <= {}", self.name(i), self.name(j))?;
            }
        }
        f.write_str(" }")
    }
}

/// Pointwise-ordered product of two posets.
pub fn product_poset(x: &FinitePoset, y: &FinitePoset) -> FinitePoset {
    x.product(y)
}

/// A total, monotone map from a finite poset into a d-rag: a test function
/// `h` for valuations on that poset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotoneMap<R> {
    domain: FinitePoset,
    table: Vec<R>,
}

impl<R: DRag> MonotoneMap<R> {
    pub fn new(domain: FinitePoset, table: Vec<R>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::NotTotal(format!(
                "{} values for {} points",
                table.len(),
                domain.len()
            )));
        }
        if let Some((i, j)) = domain.strict_pairs().find(|&(i, j)| !table[i].leq(&table[j])) {
            return Err(Error::NotMonotone(format!(
                "{} <= {} but {} is not below {}",
                domain.name(i),
                domain.name(j),
                table[i],
                table[j]
            )));
        }
        Ok(MonotoneMap { domain, table })
    }

    /// Builds from `(point name, value)` pairs; every point must be listed
    /// exactly once.
    pub fn from_pairs<S: AsRef<str>>(domain: FinitePoset, pairs: Vec<(S, R)>) -> Result<Self> {
        let mut table: Vec<Option<R>> = vec![None; domain.len()];
        for (name, value) in pairs {
            let i = domain.index_of(name.as_ref())?;
            if table[i].replace(value).is_some() {
                return Err(Error::DuplicatePoint(name.as_ref().to_owned()));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::NotTotal(domain.name(i).to_owned())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, table)
    }

    pub fn constant(domain: FinitePoset, value: R) -> Self {
        let table = vec![value; domain.len()];
        MonotoneMap { domain, table }
    }

    /// For tables that are monotone by construction (composites of monotone
    /// maps with monotone operations).
    pub(crate) fn from_monotone_table(domain: FinitePoset, table: Vec<R>) -> Self {
        debug_assert_eq!(table.len(), domain.len());
        MonotoneMap { domain, table }
    }

    /// Builds the table by applying `f` to every point, with validation.
    pub fn tabulate(domain: FinitePoset, f: impl Fn(usize) -> R) -> Result<Self> {
        let table = domain.points().map(f).collect();
        Self::new(domain, table)
    }

    pub fn domain(&self) -> &FinitePoset {
        &self.domain
    }

    pub fn at(&self, i: usize) -> &R {
        &self.table[i]
    }

    pub fn get(&self, name: &str) -> Result<&R> {
        Ok(&self.table[self.domain.index_of(name)?])
    }

    pub fn table(&self) -> &[R] {
        &self.table
    }

    /// Pointwise sum; monotone because `+` is.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.domain.ensure_same(&other.domain)?;
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a.add(b)).collect();
        Ok(Self::from_monotone_table(self.domain.clone(), table))
    }

    /// Pointwise scalar product; monotone because `*` is.
    pub fn scale(&self, a: &R) -> Self {
        let table = self.table.iter().map(|x| a.mul(x)).collect();
        Self::from_monotone_table(self.domain.clone(), table)
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.table.iter().zip(&other.table).all(|(a, b)| a.leq(b))
    }

    /// `self . g` for a monotone point map `g: source -> self.domain`.
    pub fn compose(&self, source: &FinitePoset, g: &[usize]) -> Self {
        let table = g.iter().map(|&y| self.table[y].clone()).collect();
        Self::from_monotone_table(source.clone(), table)
    }
}

impl<R: DRag> fmt::Display for MonotoneMap<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("fn h {")?;
        let mut sep = " ";
        for (i, v) in self.table.iter().enumerate() {
            write!(f, "{sep}{} -> {v}", self.domain.name(i))?;
            sep = "; ";
        }
        f.write_str(" }")
    }
}

/// A plain (not necessarily monotone) table of extended non-negative values:
/// a measurable map on a finite poset, where every set is measurable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointFn {
    domain: FinitePoset,
    values: Vec<ExtNonNeg>,
}

impl PointFn {
    pub fn new(domain: FinitePoset, values: Vec<ExtNonNeg>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::NotTotal(format!(
                "{} values for {} points",
                values.len(),
                domain.len()
            )));
        }
        Ok(PointFn { domain, values })
    }

    pub fn constant(domain: FinitePoset, value: ExtNonNeg) -> Self {
        let values = vec![value; domain.len()];
        PointFn { domain, values }
    }

    pub fn domain(&self) -> &FinitePoset {
        &self.domain
    }

    pub fn at(&self, i: usize) -> &ExtNonNeg {
        &self.values[i]
    }

    pub fn values(&self) -> &[ExtNonNeg] {
        &self.values
    }

    pub fn is_monotone(&self) -> bool {
        self.domain.strict_pairs().all(|(i, j)| self.values[i] <= self.values[j])
    }

    pub fn is_antitone(&self) -> bool {
        self.domain.strict_pairs().all(|(i, j)| self.values[i] >= self.values[j])
    }

    pub fn ensure_antitone(&self) -> Result<()> {
        match self.domain.strict_pairs().find(|&(i, j)| self.values[i] < self.values[j]) {
            None => Ok(()),
            Some((i, j)) => Err(Error::NotAntitone(format!(
                "{} <= {} but {} < {}",
                self.domain.name(i),
                self.domain.name(j),
                self.values[i],
                self.values[j]
            ))),
        }
    }

    pub fn map(&self, f: impl Fn(&ExtNonNeg) -> ExtNonNeg) -> PointFn {
        PointFn {
            domain: self.domain.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &PointFn, f: impl Fn(&ExtNonNeg, &ExtNonNeg) -> ExtNonNeg) -> Result<PointFn> {
        self.domain.ensure_same(&other.domain)?;
        Ok(PointFn {
            domain: self.domain.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `self . g` for a point map `g: source -> self.domain`.
    pub fn compose(&self, source: &FinitePoset, g: &[usize]) -> PointFn {
        PointFn {
            domain: source.clone(),
            values: g.iter().map(|&y| self.values[y].clone()).collect(),
        }
    }

    /// As a monotone map into the extended reals; fails if not monotone.
    pub fn to_monotone(&self) -> Result<MonotoneMap<ExtNonNeg>> {
        MonotoneMap::new(self.domain.clone(), self.values.clone())
    }
}

impl From<&MonotoneMap<ExtNonNeg>> for PointFn {
    fn from(h: &MonotoneMap<ExtNonNeg>) -> Self {
        PointFn {
            domain: h.domain.clone(),
            values: h.table.clone(),
        }
    }
}

/// Splits an interval-valued test function into its lower endpoint map
/// (monotone) and its upper endpoint map (antitone).
pub fn endpoint_maps(h: &MonotoneMap<IntervalValue>) -> (PointFn, PointFn) {
    let lower = PointFn {
        domain: h.domain.clone(),
        values: h.table.iter().map(|v| v.lo().clone()).collect(),
    };
    let upper = PointFn {
        domain: h.domain.clone(),
        values: h.table.iter().map(|v| v.hi().clone()).collect(),
    };
    debug_assert!(lower.is_monotone() && upper.is_antitone());
    (lower, upper)
}

/// Upward-closed set of points; on a finite poset these are exactly the
/// compact saturated sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UpperSet {
    poset: FinitePoset,
    members: PointSet,
}

impl UpperSet {
    pub fn new(poset: FinitePoset, members: PointSet) -> Result<Self> {
        if let Some(&i) = members.iter().find(|&&i| i >= poset.len()) {
            return Err(Error::PointNotInSpace(format!("#{i}")));
        }
        if !poset.is_upper(&members) {
            return Err(Error::NotUpperSet(format!("{members:?}")));
        }
        Ok(UpperSet { poset, members })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }
}

/// `↑S`: the least upper set containing every mass point, which is the
/// smallest compact saturated support of any measure whose positive-mass
/// points are `S`.
pub fn min_upper_support(poset: &FinitePoset, mass_points: &PointSet) -> Result<UpperSet> {
    if mass_points.is_empty() {
        return Err(Error::EmptySupport);
    }
    for &i in mass_points {
        poset.check_point(i)?;
    }
    Ok(UpperSet {
        poset: poset.clone(),
        members: poset.up_closure(mass_points),
    })
}

/// `↓S`: the smallest closed set containing every mass point.
pub fn closed_support(poset: &FinitePoset, mass_points: &PointSet) -> PointSet {
    poset.down_closure(mass_points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn rejects_non_orders() {
        let cyclic = FinitePoset::from_relations(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(matches!(cyclic, Err(Error::NotAPartialOrder(_))));
        let not_reflexive = FinitePoset::new(vec!["a".into()], vec![vec![false]]);
        assert!(not_reflexive.is_err());
        let not_transitive = FinitePoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]],
        );
        assert!(not_transitive.is_err());
        assert!(matches!(
            FinitePoset::from_relations(&["a", "a"], &[]),
            Err(Error::DuplicatePoint(_))
        ));
    }

    #[test]
    fn relations_are_closed_transitively() {
        let p = FinitePoset::from_relations(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
    }

    #[test]
    fn products() {
        let two = FinitePoset::chain(2);
        let sq = product_poset(&two, &two);
        assert_eq!(sq.len(), 4);
        // (0,1) and (1,0) are incomparable, (0,0) <= everything <= (1,1)
        assert!(!sq.leq(1, 2) && !sq.leq(2, 1));
        assert!((0..4).all(|k| sq.leq(0, k) && sq.leq(k, 3)));
        assert_eq!(sq.name(1), "(p0,p1)");

        let one = FinitePoset::chain(1);
        let p = FinitePoset::from_relations(&["a", "b", "c"], &[("a", "c")]).unwrap();
        let q = product_poset(&one, &p);
        assert!(p.points().all(|i| p.points().all(|j| p.leq(i, j) == q.leq(i, j))));

        let anti = product_poset(&FinitePoset::antichain(2), &FinitePoset::antichain(2));
        assert_eq!(anti.strict_pairs().count(), 0);
    }

    #[test]
    fn endpoints_of_interval_maps() {
        let p = FinitePoset::chain(2);
        let h = MonotoneMap::new(p.clone(), vec!["[0,3]".parse().unwrap(), "[1,2]".parse().unwrap()]).unwrap();
        let (lo, hi) = endpoint_maps(&h);
        assert_eq!(lo.values(), &[ExtNonNeg::int(0), ExtNonNeg::int(1)]);
        assert_eq!(hi.values(), &[ExtNonNeg::int(3), ExtNonNeg::int(2)]);
        assert!(lo.is_monotone() && hi.is_antitone());

        let c = MonotoneMap::constant(p, "[2,5]".parse::<IntervalValue>().unwrap());
        let (lo, hi) = endpoint_maps(&c);
        assert!(lo.values().iter().all(|v| *v == ExtNonNeg::int(2)));
        assert!(hi.values().iter().all(|v| *v == ExtNonNeg::int(5)));
    }

    #[test]
    fn monotone_validation() {
        let p = FinitePoset::chain(2);
        let bad = MonotoneMap::new(p.clone(), vec!["[1,2]".parse::<IntervalValue>().unwrap(), "[0,3]".parse().unwrap()]);
        assert!(matches!(bad, Err(Error::NotMonotone(_))));
        let partial = MonotoneMap::from_pairs(p, vec![("p0", ExtNonNeg::int(1))]);
        assert!(matches!(partial, Err(Error::NotTotal(_))));
    }

    #[test]
    fn supports_on_small_posets() {
        let chain = FinitePoset::chain(2);
        assert_eq!(min_upper_support(&chain, &set(&[1])).unwrap().members(), &set(&[1]));
        assert_eq!(min_upper_support(&chain, &set(&[0])).unwrap().members(), &set(&[0, 1]));
        assert_eq!(min_upper_support(&chain, &set(&[])), Err(Error::EmptySupport));
        assert_eq!(closed_support(&chain, &set(&[1])), set(&[0, 1]));
        assert_eq!(closed_support(&chain, &set(&[])), set(&[]));

        let anti = FinitePoset::antichain(2);
        assert_eq!(min_upper_support(&anti, &set(&[0])).unwrap().members(), &set(&[0]));
        assert_eq!(closed_support(&anti, &set(&[0])), set(&[0]));
    }

    #[test]
    fn support_intersection_contains_mass_points() {
        for n in 1..=4 {
            for p in FinitePoset::all_up_to_iso(n) {
                for mask in 1u32..(1 << n) {
                    let s: PointSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    let q = min_upper_support(&p, &s).unwrap();
                    let d = closed_support(&p, &s);
                    let meet: PointSet = q.members().intersection(&d).copied().collect();
                    assert!(meet.is_superset(&s));
                    assert!(!meet.is_empty());
                    let maximal = p.maximal_points();
                    if s.is_subset(&maximal) {
                        assert_eq!(meet, s);
                    }
                }
            }
        }
    }

    #[test]
    fn enumerates_posets_up_to_isomorphism() {
        let counts: Vec<usize> = (0..=5).map(|n| FinitePoset::all_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn upper_set_validation() {
        let chain = FinitePoset::chain(2);
        assert!(UpperSet::new(chain.clone(), set(&[1])).is_ok());
        assert!(matches!(UpperSet::new(chain, set(&[0])), Err(Error::NotUpperSet(_))));
    }

    #[test]
    fn monotone_map_enumeration() {
        let grid: Vec<IntervalValue> = ["[0,0]", "[1,1]", "[0,inf]"].iter().map(|s| s.parse().unwrap()).collect();
        let chain = FinitePoset::chain(2);
        let maps = chain.monotone_maps(&grid);
        // pairs (a, b) with a ⊑ b: each value below itself, plus bottom below the two others
        assert_eq!(maps.len(), 5);
        assert!(maps.iter().all(|m| MonotoneMap::new(chain.clone(), m.table().to_vec()).is_ok()));
    }
}
