//! Bier posets of bounded posets and their canonical building set.
//!
//! For a bounded poset `P` and a proper ideal `I`, the Bier poset has one
//! element `[x,y]` for every pair `x ∈ I`, `y ∉ I`, `x ≤ y`, ordered by
//! `[x,y] ≤ [v,w]` iff `x ≤ v < w ≤ y`, plus a formal top labelled
//! [`TOP`]. `[0̂,1̂]` is its least element. Interval elements are labelled
//! `"[x,y]"` from the labels of `P`, so every check below is plain label
//! arithmetic.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nested::{check_building_set, BuildingCheck, BuildingSet};
use crate::poset::{Ideal, Poset};
use crate::simplicial::SimplicialComplex;

/// Reserved label of the formal top.
pub const TOP: &str = "TOP";

/// Subsets of the canonical building set are checked exhaustively up to this
/// many members and sampled beyond.
pub const EXHAUSTIVE_MEMBER_LIMIT: usize = 14;
const SAMPLED_SUBSETS: usize = 1 << EXHAUSTIVE_MEMBER_LIMIT;

pub fn interval_label(p: &Poset, x: usize, y: usize) -> String {
    format!("[{},{}]", p.label(x), p.label(y))
}

#[derive(Clone, Debug)]
pub struct BierPoset {
    source: Poset,
    ideal: Ideal,
    zero: usize,
    one: usize,
    intervals: Vec<(usize, usize)>,
    lookup: BTreeMap<(usize, usize), usize>,
    poset: Poset,
    below_top: Poset,
}

impl BierPoset {
    pub fn new(source: &Poset, ideal: &Ideal) -> Result<Self> {
        let zero = source.least().ok_or(Error::Unbounded)?;
        let one = source.greatest().ok_or(Error::Unbounded)?;
        let ideal = Ideal::new(source, ideal.members())?;

        let mut intervals = Vec::new();
        for &x in ideal.members() {
            for y in source.up_set(x).ones() {
                if !ideal.contains(y) {
                    intervals.push((x, y));
                }
            }
        }
        let lookup = intervals
            .iter()
            .enumerate()
            .map(|(k, &pair)| (pair, k))
            .collect();
        let labels: Vec<String> = intervals
            .iter()
            .map(|&(x, y)| interval_label(source, x, y))
            .collect();
        let below = |a: usize, b: usize| {
            let ((x, y), (v, w)) = (intervals[a], intervals[b]);
            source.leq(x, v) && source.lt(v, w) && source.leq(w, y)
        };
        let below_top = Poset::from_relation(labels.clone(), below)?;

        let top = intervals.len();
        let mut with_top = labels;
        with_top.push(TOP.to_owned());
        let poset = Poset::from_relation(with_top, |a, b| b == top || (a < top && below(a, b)))?;

        Ok(BierPoset {
            source: source.clone(),
            ideal,
            zero,
            one,
            intervals,
            lookup,
            poset,
            below_top,
        })
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// The full Bier poset including the formal top (last index).
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// The Bier poset without its top; indices agree with [`Self::poset`].
    pub fn below_top(&self) -> &Poset {
        &self.below_top
    }

    pub fn top(&self) -> usize {
        self.intervals.len()
    }

    /// Index of `[0̂,1̂]`.
    pub fn least(&self) -> usize {
        self.lookup[&(self.zero, self.one)]
    }

    /// The Bier poset without top and without `[0̂,1̂]`.
    pub fn bar(&self) -> Result<Poset> {
        let least = self.least();
        let rest: Vec<usize> = (0..self.intervals.len()).filter(|&k| k != least).collect();
        self.below_top.restrict(&rest)
    }

    /// `(x, y)` for the element `[x,y]`; `None` for the top.
    pub fn interval_of(&self, element: usize) -> Option<(usize, usize)> {
        self.intervals.get(element).copied()
    }

    pub fn element_of(&self, x: usize, y: usize) -> Option<usize> {
        self.lookup.get(&(x, y)).copied()
    }

    fn lower_generators(&self) -> Vec<usize> {
        self.ideal
            .members()
            .iter()
            .copied()
            .filter(|&x| x != self.zero)
            .collect()
    }

    fn upper_generators(&self) -> Vec<usize> {
        (0..self.source.len())
            .filter(|&y| y != self.one && !self.ideal.contains(y))
            .collect()
    }

    /// `{(x, y) : x ∈ I_{>0̂}, y ∈ P̄ \ I, x < y}` with the length of `[x,y]`
    /// in `P`, sorted by length and then by labels.
    pub fn subdivision_edges(&self) -> Result<Vec<(usize, usize, usize)>> {
        let mut edges = Vec::new();
        for x in self.lower_generators() {
            for y in self.upper_generators() {
                if self.source.lt(x, y) {
                    edges.push((x, y, self.source.interval_length(x, y)?));
                }
            }
        }
        edges.sort_by(|a, b| {
            (a.2, self.source.label(a.0), self.source.label(a.1)).cmp(&(
                b.2,
                self.source.label(b.0),
                self.source.label(b.1),
            ))
        });
        Ok(edges)
    }

    /// Vertex names used for elements of `P̄`: `[x,1̂]` for `x ∈ I` and
    /// `[0̂,y]` otherwise.
    pub fn generator_label(&self, p: usize) -> String {
        if self.ideal.contains(p) {
            interval_label(&self.source, p, self.one)
        } else {
            interval_label(&self.source, self.zero, p)
        }
    }

    /// `Δ(P̄)` with vertices renamed by [`Self::generator_label`].
    pub fn initial_complex(&self) -> Result<SimplicialComplex> {
        let proper = self.source.proper_part()?;
        let map = proper
            .labels()
            .iter()
            .map(|l| {
                let p = self.source.index_of(l).expect("proper part of source");
                (l.clone(), self.generator_label(p))
            })
            .collect();
        SimplicialComplex::order_complex(&proper).relabel(&map)
    }
}

/// Which family a canonical generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `[x,1̂]` with `x ∈ I_{>0̂}`.
    Lower(usize),
    /// `[0̂,y]` with `y ∈ P̄ \ I`.
    Upper(usize),
}

/// `{[x,1̂] : x ∈ I_{>0̂}} ∪ {[0̂,y] : y ∈ P̄ \ I}` as a building set of the
/// Bier poset without its top.
#[derive(Clone, Debug)]
pub struct CanonicalBuildingSet {
    building: BuildingSet,
    generators: BTreeMap<usize, Generator>,
}

impl CanonicalBuildingSet {
    pub fn building_set(&self) -> &BuildingSet {
        &self.building
    }

    pub fn generator(&self, element: usize) -> Option<Generator> {
        self.generators.get(&element).copied()
    }

    pub fn members(&self) -> &[usize] {
        self.building.members()
    }
}

/// Builds and validates the canonical building set. A validation failure is
/// reported as [`Error::Falsified`].
pub fn canonical_building_set(b: &BierPoset) -> Result<CanonicalBuildingSet> {
    let mut generators = BTreeMap::new();
    for x in b.lower_generators() {
        generators.insert(b.lookup[&(x, b.one)], Generator::Lower(x));
    }
    for y in b.upper_generators() {
        generators.insert(b.lookup[&(b.zero, y)], Generator::Upper(y));
    }
    let members: Vec<usize> = generators.keys().copied().collect();
    match check_building_set(b.below_top(), &members)? {
        BuildingCheck::Valid(building) => Ok(CanonicalBuildingSet {
            building,
            generators,
        }),
        BuildingCheck::Invalid { element, .. } => Err(Error::Falsified {
            claim: "canonical Bier building set".into(),
            witness: format!(
                "no pinned product decomposition below `{}`",
                b.below_top().label(element)
            ),
        }),
    }
}

fn split(g: &CanonicalBuildingSet, n: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for &e in n {
        match g.generator(e) {
            Some(Generator::Lower(x)) => lower.push(x),
            Some(Generator::Upper(y)) => upper.push(y),
            None => {}
        }
    }
    (lower, upper)
}

/// The combinatorial characterisation of nested subsets of the canonical
/// building set: upper generators pairwise comparable, lower generators
/// pairwise comparable, and `x < y` for every lower `[x,1̂]` and upper
/// `[0̂,y]`.
pub fn nested_by_conditions(b: &BierPoset, g: &CanonicalBuildingSet, n: &[usize]) -> bool {
    let p = b.source();
    let (lower, upper) = split(g, n);
    let pairwise = |xs: &[usize]| {
        xs.iter()
            .enumerate()
            .all(|(k, &a)| xs[k + 1..].iter().all(|&c| p.comparable(a, c)))
    };
    pairwise(&upper) && pairwise(&lower) && lower.iter().all(|&x| upper.iter().all(|&y| p.lt(x, y)))
}

#[derive(Clone, Debug, Serialize)]
pub struct NestednessReport {
    pub members: usize,
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// A subset on which the nested test and the conditions disagree.
    pub witness: Option<Vec<String>>,
}

impl NestednessReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares `is_nested` with [`nested_by_conditions`] on every subset of the
/// canonical building set, or on `2^14` seeded random subsets when it has
/// more than [`EXHAUSTIVE_MEMBER_LIMIT`] members.
pub fn check_nested_conditions(
    b: &BierPoset,
    g: &CanonicalBuildingSet,
    seed: u64,
) -> Result<NestednessReport> {
    let members = g.members();
    let m = members.len();
    let exhaustive = m <= EXHAUSTIVE_MEMBER_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if exhaustive {
        1usize << m
    } else {
        SAMPLED_SUBSETS
    };
    for k in 0..count {
        let subset: Vec<usize> = if exhaustive {
            (0..m)
                .filter(|i| k >> i & 1 == 1)
                .map(|i| members[i])
                .collect()
        } else {
            members
                .iter()
                .copied()
                .filter(|_| rng.random_bool(0.5))
                .collect()
        };
        if g.building_set().is_nested(&subset)? != nested_by_conditions(b, g, &subset) {
            return Ok(NestednessReport {
                members: m,
                exhaustive,
                subsets_checked: k + 1,
                witness: Some(b.below_top().labels_of(&subset)),
            });
        }
    }
    Ok(NestednessReport {
        members: m,
        exhaustive,
        subsets_checked: count,
        witness: None,
    })
}

/// The underlying chain `x_1 < … < x_s < y_1 < … < y_t` of a nested set,
/// listed bottom to top.
pub fn chain_map_f(b: &BierPoset, g: &CanonicalBuildingSet, n: &[usize]) -> Result<Vec<usize>> {
    if let Some(w) = g.building_set().nested_witness(n)? {
        return Err(Error::NotNested {
            witness: b.below_top().labels_of(&w),
        });
    }
    let (mut chain, upper) = split(g, n);
    chain.extend(upper);
    let heights = b.source().heights();
    chain.sort_by_key(|&c| heights[c]);
    chain.dedup();
    Ok(chain)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainBijectionReport {
    pub nested_sets: usize,
    pub chains: usize,
    pub bijective: bool,
    pub witness: Option<Vec<String>>,
}

/// Checks that [`chain_map_f`] maps the nested sets of the canonical
/// building set bijectively onto the chains of `P̄`.
pub fn verify_chain_bijection(
    b: &BierPoset,
    g: &CanonicalBuildingSet,
) -> Result<ChainBijectionReport> {
    let below = b.below_top();
    let p = b.source();
    let nested = g.building_set().nested_complex();
    let chains = SimplicialComplex::order_complex(&p.proper_part()?);

    let mut images = std::collections::BTreeSet::new();
    for face in nested.faces() {
        let n = below.indices_of(&face)?;
        let chain = chain_map_f(b, g, &n)?;
        let is_chain = chain.windows(2).all(|w| p.lt(w[0], w[1]));
        let labels = p.labels_of(&chain);
        if !is_chain || chain.len() != n.len() || !chains.contains(&labels) {
            return Ok(ChainBijectionReport {
                nested_sets: nested.num_faces(),
                chains: chains.num_faces(),
                bijective: false,
                witness: Some(face.iter().map(|s| s.to_string()).collect()),
            });
        }
        let mut key = labels;
        key.sort();
        images.insert(key);
    }
    // The map is induced by a vertex bijection, so equality after renaming
    // gives injectivity, surjectivity and two-sided inclusion preservation.
    let rename: BTreeMap<String, String> = g
        .members()
        .iter()
        .map(|&e| {
            let source = match g.generator(e).expect("member is a generator") {
                Generator::Lower(x) | Generator::Upper(x) => x,
            };
            (below.label(e).to_owned(), p.label(source).to_owned())
        })
        .collect();
    let bijective = images.len() == nested.num_faces()
        && images.len() == chains.num_faces()
        && nested.equals_under_map(&chains, &rename)?;
    Ok(ChainBijectionReport {
        nested_sets: nested.num_faces(),
        chains: chains.num_faces(),
        bijective,
        witness: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeStep {
    pub x: String,
    pub y: String,
    pub length: usize,
    pub vertex: String,
    pub f_vector: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeSubdivisionReport {
    pub initial_f_vector: Vec<usize>,
    pub steps: Vec<EdgeStep>,
    pub final_f_vector: Vec<usize>,
    pub target_f_vector: Vec<usize>,
    pub equal: bool,
    /// Set when a scheduled edge was no longer a face.
    pub failure: Option<String>,
}

impl EdgeSubdivisionReport {
    pub fn passed(&self) -> bool {
        self.equal && self.failure.is_none()
    }
}

/// Stellar-subdivides the edges `{[x,1̂], [0̂,y]}` of `start` in the given
/// order, naming each new vertex `[x,y]`. Returns the stale edge on failure.
pub fn subdivide_edges(
    b: &BierPoset,
    start: &SimplicialComplex,
    schedule: &[(usize, usize)],
) -> Result<(SimplicialComplex, Vec<EdgeStep>), (Vec<EdgeStep>, String)> {
    let p = b.source();
    let mut current = start.clone();
    let mut steps = Vec::with_capacity(schedule.len());
    for &(x, y) in schedule {
        let edge = [b.generator_label(x), b.generator_label(y)];
        if !current.contains(&edge) {
            let msg = format!(
                "edge {{{}, {}}} is not a face when scheduled",
                edge[0], edge[1]
            );
            return Err((steps, msg));
        }
        let vertex = interval_label(p, x, y);
        match current.stellar_subdivision(&edge, &vertex) {
            Ok(next) => current = next,
            Err(e) => return Err((steps, e.to_string())),
        }
        steps.push(EdgeStep {
            x: p.label(x).to_owned(),
            y: p.label(y).to_owned(),
            length: p.interval_length(x, y).unwrap_or(0),
            vertex,
            f_vector: current.f_vector(),
        });
    }
    Ok((current, steps))
}

/// Subdivides `Δ(P̄)` along every crossing edge in increasing interval
/// length and compares the result with the order complex of the Bier poset
/// without top and bottom.
pub fn verify_edge_subdivision(source: &Poset, ideal: &Ideal) -> Result<EdgeSubdivisionReport> {
    let b = BierPoset::new(source, ideal)?;
    let schedule: Vec<(usize, usize)> = b
        .subdivision_edges()?
        .into_iter()
        .map(|(x, y, _)| (x, y))
        .collect();
    edge_subdivision_with_schedule(&b, &schedule)
}

pub fn edge_subdivision_with_schedule(
    b: &BierPoset,
    schedule: &[(usize, usize)],
) -> Result<EdgeSubdivisionReport> {
    let start = b.initial_complex()?;
    let target = SimplicialComplex::order_complex(&b.bar()?);
    let initial_f_vector = start.f_vector();
    Ok(match subdivide_edges(b, &start, schedule) {
        Ok((result, steps)) => EdgeSubdivisionReport {
            initial_f_vector,
            steps,
            final_f_vector: result.f_vector(),
            target_f_vector: target.f_vector(),
            equal: result == target,
            failure: None,
        },
        Err((steps, msg)) => EdgeSubdivisionReport {
            initial_f_vector,
            final_f_vector: steps.last().map(|s| s.f_vector.clone()).unwrap_or_default(),
            steps,
            target_f_vector: target.f_vector(),
            equal: false,
            failure: Some(msg),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub ideal: Vec<String>,
    pub vertices: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub expected_euler_characteristic: i64,
    pub dimension: isize,
    pub expected_dimension: isize,
    pub pure: bool,
    pub pseudomanifold: bool,
}

impl SphereReport {
    pub fn passed(&self) -> bool {
        self.pure
            && self.pseudomanifold
            && self.dimension == self.expected_dimension
            && self.euler_characteristic == self.expected_euler_characteristic
    }
}

/// Sphere diagnostics for `Δ` of the Bier poset without top and bottom,
/// compared against a sphere of dimension `length(P) - 2`.
pub fn sphere_report(source: &Poset, ideal: &Ideal) -> Result<SphereReport> {
    let b = BierPoset::new(source, ideal)?;
    let k = SimplicialComplex::order_complex(&b.bar()?);
    let d = source.length() as isize - 2;
    let mut ideal_labels = source.labels_of(ideal.members());
    ideal_labels.sort();
    Ok(SphereReport {
        ideal: ideal_labels,
        vertices: k.vertices().len(),
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        expected_euler_characteristic: if d % 2 == 0 { 2 } else { 0 },
        dimension: k.dimension(),
        expected_dimension: d,
        pure: k.is_pure(),
        pseudomanifold: k.is_pseudomanifold(),
    })
}

/// [`sphere_report`] on the Boolean lattice `B_n`, `2 ≤ n ≤ 6`.
pub fn bier_sphere_report<S: AsRef<str>>(n: usize, ideal: &[S]) -> Result<SphereReport> {
    if !(2..=6).contains(&n) {
        return Err(Error::Precondition(format!("rank {n} outside 2..=6")));
    }
    let bn = Poset::boolean_lattice(n)?;
    let i = Ideal::from_labels(&bn, ideal)?;
    sphere_report(&bn, &i)
}

/// A random proper ideal: the down-closure of a random set of non-top
/// generators (each kept with probability `density`).
pub fn random_proper_ideal<R: Rng>(p: &Poset, density: f64, rng: &mut R) -> Result<Ideal> {
    let zero = p.least().ok_or(Error::NoLeastElement)?;
    let one = p.greatest();
    let candidates: Vec<usize> = (0..p.len()).filter(|&x| Some(x) != one).collect();
    let mut generators: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|_| rng.random_bool(density))
        .collect();
    if generators.is_empty() {
        generators.push(*candidates.choose(rng).unwrap_or(&zero));
    }
    let mut members = p.set_of(&[zero]);
    for g in generators {
        members.union_with(p.down_set(g));
    }
    Ideal::new(p, &members.ones().collect::<Vec<_>>())
}
