//! Finite posets stored as dense up-set/down-set bit matrices.
//!
//! Elements are addressed by their position (`usize`) in [`Poset::labels`].
//! Every operation that accepts element indices reports
//! [`Error::UnknownElement`] for out-of-range positions instead of panicking.

mod ideal;
mod iso;

pub use ideal::Ideal;
pub use iso::{constrained_isomorphism, ConstrainedIso};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::PosetFile;

/// A finite partially ordered set with opaque string labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "PosetFile", try_from = "PosetFile")]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

/// An antichain of size at least two whose set of minimal upper bounds has
/// at least two elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigCut {
    pub antichain: Vec<usize>,
    pub upper_bounds: Vec<usize>,
}

/// The closed interval `[lo, hi]` together with its induced subposet.
///
/// The carrier keeps the ambient labels; `members()[k]` is the ambient index
/// of carrier element `k`.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: usize,
    hi: usize,
    members: Vec<usize>,
    carrier: Poset,
}

impl Interval {
    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn carrier(&self) -> &Poset {
        &self.carrier
    }

    /// Position of an ambient element inside the carrier.
    pub fn local_index(&self, ambient: usize) -> Option<usize> {
        self.members.binary_search(&ambient).ok()
    }
}

fn build_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

fn transpose(up: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let n = up.len();
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in up.iter().enumerate() {
        for j in row.ones() {
            down[j].insert(i);
        }
    }
    down
}

impl Poset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// `covers`.
    pub fn from_covers<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_owned()).collect();
        let index = build_index(&labels)?;
        let n = labels.len();
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.to_owned()))
        };

        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (a, b) in covers {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                return Err(Error::Cycle(labels[a].clone()));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }

        // Kahn's algorithm; anything left over lies on or behind a cycle.
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = ready.pop() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(labels[stuck].clone()));
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &i in order.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(i);
            for &j in &succ[i] {
                row.union_with(&up[j]);
            }
            up[i] = row;
        }
        let down = transpose(&up);
        Ok(Poset {
            labels,
            index,
            up,
            down,
        })
    }

    /// Builds a poset from an explicit `leq` predicate, checking reflexivity,
    /// antisymmetry and transitivity.
    pub fn from_relation<F>(labels: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool,
    {
        let index = build_index(&labels)?;
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row.insert(j);
                }
            }
        }
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(Error::NotAPartialOrder(format!(
                    "`{}` is not related to itself",
                    labels[i]
                )));
            }
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` and `{}` violate antisymmetry",
                        labels[i], labels[j]
                    )));
                }
                if !up[j].is_subset(&up[i]) {
                    return Err(Error::NotAPartialOrder(format!(
                        "relation is not transitive at `{}` <= `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let down = transpose(&up);
        Ok(Poset {
            labels,
            index,
            up,
            down,
        })
    }

    /// The chain `labels[0] < labels[1] < ...`.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let covers: Vec<(&str, &str)> = labels
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let labels: Vec<&str> = labels.iter().map(|l| l.as_ref()).collect();
        Poset::from_covers(&labels, &covers)
    }

    pub fn antichain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels: Vec<&str> = labels.iter().map(|l| l.as_ref()).collect();
        Poset::from_covers::<&str>(&labels, &[])
    }

    /// Subsets of `{1..n}` ordered by inclusion, labelled `{}`, `{1}`,
    /// `{1,2}`, ...
    pub fn boolean_lattice(n: usize) -> Result<Self> {
        if n > 10 {
            return Err(Error::TooLarge(format!("boolean lattice of rank {n}")));
        }
        let size = 1usize << n;
        let labels = (0..size).map(|m| subset_label(m, n)).collect();
        Poset::from_relation(labels, |a, b| a & !b == 0)
    }

    /// Adjoins a new least element.
    pub fn with_least(&self, label: &str) -> Result<Self> {
        let mut labels = Vec::with_capacity(self.len() + 1);
        labels.push(label.to_owned());
        labels.extend(self.labels.iter().cloned());
        Poset::from_relation(labels, |a, b| a == 0 || (b > 0 && self.leq(a - 1, b - 1)))
    }

    /// Adjoins a new greatest element.
    pub fn with_greatest(&self, label: &str) -> Result<Self> {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(label.to_owned());
        Poset::from_relation(labels, |a, b| b == n || (a < n && self.leq(a, b)))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels_of(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.labels[x].clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    pub(crate) fn check(&self, i: usize) -> Result<usize> {
        if i < self.len() {
            Ok(i)
        } else {
            Err(Error::UnknownElement(i))
        }
    }

    pub(crate) fn check_all(&self, xs: &[usize]) -> Result<()> {
        xs.iter().try_for_each(|&x| self.check(x).map(|_| ()))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{y : x <= y}`.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{y : y <= x}`.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i].count_ones(..) == self.len())
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.down[i].count_ones(..) == self.len())
    }

    pub fn is_bounded(&self) -> bool {
        self.least().is_some() && self.greatest().is_some()
    }

    /// Minimal elements of a subset.
    pub fn minimal_of(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&x| self.down[x].ones().all(|y| y == x || !set.contains(y)))
            .collect()
    }

    /// Maximal elements of a subset.
    pub fn maximal_of(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&x| self.up[x].ones().all(|y| y == x || !set.contains(y)))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        self.minimal_of(&self.full_set())
    }

    pub fn maximal(&self) -> Vec<usize> {
        self.maximal_of(&self.full_set())
    }

    pub(crate) fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        s.insert_range(..);
        s
    }

    pub(crate) fn set_of(&self, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.len());
        for &x in xs {
            s.insert(x);
        }
        s
    }

    /// Cover pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in self.up[a].ones() {
                if b == a {
                    continue;
                }
                let between = self.up[a]
                    .intersection(&self.down[b])
                    .any(|c| c != a && c != b);
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `{p : p >= x for all x in xs}`; everything when `xs` is empty.
    pub fn common_upper(&self, xs: &[usize]) -> Result<FixedBitSet> {
        self.check_all(xs)?;
        let mut s = self.full_set();
        for &x in xs {
            s.intersect_with(&self.up[x]);
        }
        Ok(s)
    }

    pub fn common_lower(&self, xs: &[usize]) -> Result<FixedBitSet> {
        self.check_all(xs)?;
        let mut s = self.full_set();
        for &x in xs {
            s.intersect_with(&self.down[x]);
        }
        Ok(s)
    }

    /// Minimal common upper bounds of `xs`.
    pub fn upper_bounds(&self, xs: &[usize]) -> Result<Vec<usize>> {
        Ok(self.minimal_of(&self.common_upper(xs)?))
    }

    /// Maximal common lower bounds of `xs`.
    pub fn lower_bounds(&self, xs: &[usize]) -> Result<Vec<usize>> {
        Ok(self.maximal_of(&self.common_lower(xs)?))
    }

    pub fn join(&self, xs: &[usize]) -> Result<Option<usize>> {
        let ub = self.upper_bounds(xs)?;
        Ok(if ub.len() == 1 { Some(ub[0]) } else { None })
    }

    pub fn meet(&self, xs: &[usize]) -> Result<Option<usize>> {
        let lb = self.lower_bounds(xs)?;
        Ok(if lb.len() == 1 { Some(lb[0]) } else { None })
    }

    pub fn is_antichain(&self, xs: &[usize]) -> bool {
        xs.iter()
            .enumerate()
            .all(|(k, &a)| xs[k + 1..].iter().all(|&b| !self.comparable(a, b)))
    }

    /// Calls `f` once for every nonempty antichain drawn from `candidates`
    /// (in candidate order), stopping early on `Break`.
    pub fn visit_antichains<B, F>(&self, candidates: &[usize], mut f: F) -> ControlFlow<B>
    where
        F: FnMut(&[usize]) -> ControlFlow<B>,
    {
        let mut current = Vec::new();
        self.visit_antichains_from(candidates, 0, &mut current, &mut f)
    }

    fn visit_antichains_from<B, F>(
        &self,
        candidates: &[usize],
        start: usize,
        current: &mut Vec<usize>,
        f: &mut F,
    ) -> ControlFlow<B>
    where
        F: FnMut(&[usize]) -> ControlFlow<B>,
    {
        for k in start..candidates.len() {
            let c = candidates[k];
            if current.iter().all(|&a| !self.comparable(a, c)) {
                current.push(c);
                f(current)?;
                self.visit_antichains_from(candidates, k + 1, current, f)?;
                current.pop();
            }
        }
        ControlFlow::Continue(())
    }

    /// All antichains with at least two elements whose upper-bound set has
    /// at least two elements. Only antichains are enumerated: the common
    /// upper bounds of a set depend only on its maximal elements.
    pub fn big_cuts(&self) -> Vec<BigCut> {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut out = Vec::new();
        let _ = self.visit_antichains(&all, |a| {
            if a.len() >= 2 {
                let ub = self.minimal_of(&self.common_upper(a).expect("indices in range"));
                if ub.len() >= 2 {
                    out.push(BigCut {
                        antichain: a.to_vec(),
                        upper_bounds: ub,
                    });
                }
            }
            ControlFlow::<()>::Continue(())
        });
        out
    }

    /// Induced subposet on `members` (kept in ascending index order).
    pub fn restrict(&self, members: &[usize]) -> Result<Poset> {
        self.check_all(members)?;
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let labels = members.iter().map(|&m| self.labels[m].clone()).collect();
        Poset::from_relation(labels, |a, b| self.leq(members[a], members[b]))
    }

    /// Elements strictly above the least element, or an error if there is
    /// none.
    pub fn above_least(&self) -> Result<Poset> {
        let zero = self.least().ok_or(Error::NoLeastElement)?;
        let rest: Vec<usize> = (0..self.len()).filter(|&i| i != zero).collect();
        self.restrict(&rest)
    }

    /// `P` without its least and greatest elements.
    pub fn proper_part(&self) -> Result<Poset> {
        let zero = self.least().ok_or(Error::Unbounded)?;
        let one = self.greatest().ok_or(Error::Unbounded)?;
        let rest: Vec<usize> = (0..self.len()).filter(|&i| i != zero && i != one).collect();
        self.restrict(&rest)
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Result<Interval> {
        self.check(lo)?;
        self.check(hi)?;
        if !self.leq(lo, hi) {
            return Err(Error::NotComparable {
                lo: self.labels[lo].clone(),
                hi: self.labels[hi].clone(),
            });
        }
        let members: Vec<usize> = self.up[lo].intersection(&self.down[hi]).collect();
        let carrier = self.restrict(&members)?;
        Ok(Interval {
            lo,
            hi,
            members,
            carrier,
        })
    }

    /// Cartesian product with the componentwise order. Element order is
    /// lexicographic in the component indices (last component fastest); the
    /// empty product is a one-element poset labelled `()`.
    pub fn product(factors: &[&Poset]) -> Poset {
        let sizes: Vec<usize> = factors.iter().map(|p| p.len()).collect();
        let total: usize = sizes.iter().product();
        let coords: Vec<Vec<usize>> = (0..total).map(|i| tuple_coords(&sizes, i)).collect();
        let labels: Vec<String> = coords
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().zip(factors).map(|(&k, p)| p.label(k)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let n = total;
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                let le = coords[a]
                    .iter()
                    .zip(&coords[b])
                    .zip(factors)
                    .all(|((&x, &y), p)| p.leq(x, y));
                if le {
                    up[a].insert(b);
                }
            }
        }
        let down = transpose(&up);
        // Component labels are distinct within each factor, so tuple labels
        // are distinct as well.
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Poset {
            labels,
            index,
            up,
            down,
        }
    }

    /// Deterministic linear extension: Kahn's algorithm, always emitting the
    /// lexicographically smallest available label.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut pending: Vec<usize> = (0..n).map(|i| self.down[i].count_ones(..) - 1).collect();
        let mut heap: BinaryHeap<Reverse<(&str, usize)>> = (0..n)
            .filter(|&i| pending[i] == 0)
            .map(|i| Reverse((self.labels[i].as_str(), i)))
            .collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse((_, i))) = heap.pop() {
            out.push(i);
            for j in self.up[i].ones() {
                if j != i {
                    pending[j] -= 1;
                    if pending[j] == 0 {
                        heap.push(Reverse((self.labels[j].as_str(), j)));
                    }
                }
            }
        }
        out
    }

    /// `heights()[x]` is the edge count of a longest chain with top `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for x in self.linear_extension() {
            h[x] = self.down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Edge count of a longest chain; 0 for the empty and one-element poset.
    pub fn length(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Edge count of a longest chain from `lo` to `hi`.
    pub fn interval_length(&self, lo: usize, hi: usize) -> Result<usize> {
        Ok(self.interval(lo, hi)?.carrier().length())
    }

    /// Whether `set` is downward closed.
    pub fn is_ideal(&self, set: &[usize]) -> Result<bool> {
        self.check_all(set)?;
        let s = self.set_of(set);
        Ok(set.iter().all(|&x| self.down[x].is_subset(&s)))
    }

    /// Chains (totally ordered subsets), each listed bottom to top. Includes
    /// the empty chain.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let order = self.linear_extension();
        let mut out = vec![Vec::new()];
        let mut current = Vec::new();
        self.extend_chains(&order, 0, &mut current, &mut out);
        out
    }

    fn extend_chains(
        &self,
        order: &[usize],
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for k in start..order.len() {
            let c = order[k];
            if current.last().is_none_or(|&top| self.lt(top, c)) {
                current.push(c);
                out.push(current.clone());
                self.extend_chains(order, k + 1, current, out);
                current.pop();
            }
        }
    }

    /// Down-set count, up-set count and height per element; preserved by
    /// every isomorphism.
    pub(crate) fn fingerprints(&self) -> Vec<(usize, usize, usize)> {
        let h = self.heights();
        (0..self.len())
            .map(|i| (self.down[i].count_ones(..), self.up[i].count_ones(..), h[i]))
            .collect()
    }
}

/// Equality as labelled posets: same labels and same order, regardless of
/// element order.
impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Ok(map) = other.indices_of(&self.labels) else {
            return false;
        };
        (0..self.len())
            .all(|a| (0..self.len()).all(|b| self.leq(a, b) == other.leq(map[a], map[b])))
    }
}

impl Eq for Poset {}

pub(crate) fn tuple_coords(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut coords = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        coords[k] = index % sizes[k];
        index /= sizes[k];
    }
    coords
}

pub(crate) fn tuple_index(sizes: &[usize], coords: &[usize]) -> usize {
    coords
        .iter()
        .zip(sizes)
        .fold(0, |acc, (&c, &s)| acc * s + c)
}

fn subset_label(mask: usize, n: usize) -> String {
    let parts: Vec<String> = (0..n)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| (k + 1).to_string())
        .collect();
    format!("{{{}}}", parts.join(","))
}
