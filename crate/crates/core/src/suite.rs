//! Exhaustive and sampled verification drivers with serialisable summaries.
//!
//! Every driver records failures with a witness instead of stopping, so a
//! summary with an empty `failures` list is a full pass.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bier::{
    canonical_building_set, check_nested_conditions, edge_subdivision_with_schedule,
    random_proper_ideal, sphere_report, verify_chain_bijection, BierPoset, SphereReport,
};
use crate::enumerate::{all_building_sets, bounded_posets, posets_with_least, proper_ideals};
use crate::error::{Error, Result};
use crate::io::PosetFile;
use crate::nested::{BuildingSet, SequenceReport, StepCase};
use crate::poset::{Ideal, Poset};

/// An instance on which a claim failed.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub claim: String,
    pub poset: PosetFile,
    pub members: Vec<String>,
    pub detail: String,
}

fn failure(claim: &str, p: &Poset, members: &[usize], detail: impl Into<String>) -> Failure {
    let mut labels = p.labels_of(members);
    labels.sort();
    Failure {
        claim: claim.to_owned(),
        poset: PosetFile::from(p),
        members: labels,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DichotomySummary {
    pub max_elements: usize,
    pub posets: usize,
    pub building_sets: usize,
    pub steps: usize,
    pub subdivision_steps: usize,
    pub cone_steps: usize,
    pub failures: Vec<Failure>,
}

impl DichotomySummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every extension step over every building set of every poset with a least
/// element on at most `max_elements` elements, up to isomorphism.
pub fn dichotomy_exhaustive(max_elements: usize) -> Result<DichotomySummary> {
    let mut s = DichotomySummary {
        max_elements,
        ..Default::default()
    };
    for p in posets_with_least(max_elements)? {
        s.posets += 1;
        for members in all_building_sets(&p)? {
            s.building_sets += 1;
            let g = BuildingSet::new(&p, &members)?;
            for x in g.extension_candidates() {
                s.steps += 1;
                match g.extension_step(x) {
                    Ok(r) => {
                        match r.case {
                            StepCase::Subdivision => s.subdivision_steps += 1,
                            StepCase::Cone => s.cone_steps += 1,
                        }
                        if !r.equal {
                            let detail = format!("step adding `{}` ({:?}) differs", r.x, r.case);
                            s.failures.push(failure("dichotomy", &p, &members, detail));
                        }
                    }
                    Err(e) => s.failures.push(failure(
                        "dichotomy",
                        &p,
                        &members,
                        format!("adding `{}`: {e}", p.label(x)),
                    )),
                }
            }
        }
    }
    Ok(s)
}

/// Whether a sequence report is consistent with the big-cut criterion:
/// condition true implies only subdivisions, and the end result is always
/// the order complex.
pub fn sequence_consistent(r: &SequenceReport) -> bool {
    r.passed() && (!r.big_cut_condition || r.all_subdivisions())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SequenceSummary {
    pub max_elements: usize,
    pub posets: usize,
    pub building_sets: usize,
    pub condition_holds: usize,
    pub condition_fails_all_subdivisions: usize,
    pub condition_fails_with_cone: usize,
    pub failures: Vec<Failure>,
}

impl SequenceSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the full subdivision sequence for every `(P, G)` of
/// [`dichotomy_exhaustive`].
pub fn sequence_exhaustive(max_elements: usize) -> Result<SequenceSummary> {
    let mut s = SequenceSummary {
        max_elements,
        ..Default::default()
    };
    for p in posets_with_least(max_elements)? {
        s.posets += 1;
        for members in all_building_sets(&p)? {
            s.building_sets += 1;
            let g = BuildingSet::new(&p, &members)?;
            match g.subdivision_sequence() {
                Ok(r) => {
                    match (r.big_cut_condition, r.all_subdivisions()) {
                        (true, _) => s.condition_holds += 1,
                        (false, true) => s.condition_fails_all_subdivisions += 1,
                        (false, false) => s.condition_fails_with_cone += 1,
                    }
                    if !sequence_consistent(&r) {
                        let detail = if r.passed() {
                            "cone step although every big cut lies in G".to_owned()
                        } else {
                            "sequence does not end at the order complex".to_owned()
                        };
                        s.failures.push(failure("sequence", &p, &members, detail));
                    }
                }
                Err(e) => s
                    .failures
                    .push(failure("sequence", &p, &members, e.to_string())),
            }
        }
    }
    Ok(s)
}

/// Which per-instance Bier claims a grid run checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BierClaims {
    pub building_set: bool,
    pub nested_conditions: bool,
    pub chain_bijection: bool,
    pub edge_subdivision: bool,
    pub tie_breaks: bool,
    pub only_subdivisions: bool,
}

impl BierClaims {
    pub const ALL: BierClaims = BierClaims {
        building_set: true,
        nested_conditions: true,
        chain_bijection: true,
        edge_subdivision: true,
        tie_breaks: true,
        only_subdivisions: true,
    };
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BierSummary {
    pub max_elements: usize,
    pub posets: usize,
    pub instances: usize,
    pub building_sets_checked: usize,
    pub nested_subsets_checked: usize,
    pub bijections_checked: usize,
    pub subdivisions_checked: usize,
    pub tie_break_schedules: usize,
    pub sequences_checked: usize,
    /// Sequences whose start violates the big-cut condition.
    pub sequences_without_condition: usize,
    pub failures: Vec<Failure>,
}

impl BierSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Schedules differing from the sorted one only inside equal-length classes:
/// all of them when there are at most `exhaustive_limit` edges, otherwise
/// `samples` seeded shuffles.
pub fn tie_break_schedules(
    b: &BierPoset,
    exhaustive_limit: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<(usize, usize)>>> {
    let edges = b.subdivision_edges()?;
    let mut classes: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, y, len) in edges.iter().copied() {
        classes.entry(len).or_default().push((x, y));
    }
    if edges.len() <= exhaustive_limit {
        let per_class: Vec<Vec<Vec<(usize, usize)>>> = classes
            .values()
            .map(|c| c.iter().copied().permutations(c.len()).collect())
            .collect();
        if per_class.is_empty() {
            return Ok(vec![Vec::new()]);
        }
        return Ok(per_class
            .into_iter()
            .multi_cartesian_product()
            .map(|parts| parts.concat())
            .collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| {
            classes
                .values()
                .flat_map(|c| {
                    let mut c = c.clone();
                    c.shuffle(&mut rng);
                    c
                })
                .collect()
        })
        .collect())
}

/// Checks the requested claims for one `(P, I)` and appends failures.
pub fn check_bier_instance(
    p: &Poset,
    ideal: &Ideal,
    claims: BierClaims,
    seed: u64,
    s: &mut BierSummary,
) -> Result<()> {
    s.instances += 1;
    let fail = |s: &mut BierSummary, claim: &str, detail: String| {
        s.failures.push(failure(claim, p, ideal.members(), detail));
    };
    let b = BierPoset::new(p, ideal)?;
    let g = match canonical_building_set(&b) {
        Ok(g) => g,
        Err(e @ Error::Falsified { .. }) => {
            fail(s, "canonical building set", e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    if claims.building_set {
        s.building_sets_checked += 1;
    }
    if claims.nested_conditions {
        let r = check_nested_conditions(&b, &g, seed)?;
        s.nested_subsets_checked += r.subsets_checked;
        if let Some(w) = r.witness {
            fail(s, "nested conditions", format!("disagreement on {w:?}"));
        }
    }
    if claims.chain_bijection {
        let r = verify_chain_bijection(&b, &g)?;
        s.bijections_checked += 1;
        if !r.bijective {
            fail(s, "chain bijection", format!("witness {:?}", r.witness));
        }
    }
    if claims.only_subdivisions {
        let r = g.building_set().subdivision_sequence()?;
        s.sequences_checked += 1;
        s.sequences_without_condition += usize::from(!r.big_cut_condition);
        if !(r.passed() && r.all_subdivisions()) {
            let cones: Vec<&str> = r
                .steps
                .iter()
                .filter(|st| st.case == StepCase::Cone)
                .map(|st| st.x.as_str())
                .collect();
            fail(s, "only subdivisions", format!("cone steps at {cones:?}"));
        }
    }
    let mut schedules = Vec::new();
    if claims.edge_subdivision {
        let sorted = b
            .subdivision_edges()?
            .into_iter()
            .map(|(x, y, _)| (x, y))
            .collect();
        schedules.push((false, sorted));
    }
    if claims.tie_breaks {
        for t in tie_break_schedules(&b, 5, 8, seed)? {
            schedules.push((true, t));
        }
    }
    for (permuted, schedule) in schedules {
        let r = edge_subdivision_with_schedule(&b, &schedule)?;
        if permuted {
            s.tie_break_schedules += 1;
        } else {
            s.subdivisions_checked += 1;
        }
        if !r.passed() {
            let order: Vec<String> = schedule
                .iter()
                .map(|&(x, y)| format!("{}<{}", p.label(x), p.label(y)))
                .collect();
            let why = r
                .failure
                .unwrap_or_else(|| "result differs from target".into());
            fail(s, "edge subdivision", format!("schedule {order:?}: {why}"));
        }
    }
    Ok(())
}

/// [`check_bier_instance`] over every bounded poset on at most
/// `max_elements` elements and each of its proper ideals.
pub fn bier_exhaustive(max_elements: usize, claims: BierClaims, seed: u64) -> Result<BierSummary> {
    let mut s = BierSummary {
        max_elements,
        ..Default::default()
    };
    for p in bounded_posets(max_elements)? {
        s.posets += 1;
        for ideal in proper_ideals(&p)? {
            check_bier_instance(&p, &ideal, claims, seed, &mut s)?;
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereSummary {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub passed: usize,
    pub euler_characteristics: Vec<i64>,
    pub failures: Vec<SphereReport>,
}

impl SphereSummary {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.passed == self.samples
    }
}

/// Sphere diagnostics on `samples` seeded random proper ideals of `B_n`.
pub fn sphere_suite(n: usize, samples: usize, seed: u64) -> Result<SphereSummary> {
    if !(2..=6).contains(&n) {
        return Err(Error::Precondition(format!("rank {n} outside 2..=6")));
    }
    let bn = Poset::boolean_lattice(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
    let mut out = SphereSummary {
        n,
        samples,
        seed,
        passed: 0,
        euler_characteristics: Vec::with_capacity(samples),
        failures: Vec::new(),
    };
    for _ in 0..samples {
        let ideal = random_proper_ideal(&bn, 1.0 / n as f64, &mut rng)?;
        let r = sphere_report(&bn, &ideal)?;
        out.euler_characteristics.push(r.euler_characteristic);
        if r.passed() {
            out.passed += 1;
        } else {
            out.failures.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grids_pass() {
        let d = dichotomy_exhaustive(5).unwrap();
        assert!(d.passed(), "{:?}", d.failures);
        assert!(d.cone_steps > 0 && d.subdivision_steps > 0);
        assert!(sequence_exhaustive(4).unwrap().passed());
        assert!(bier_exhaustive(5, BierClaims::ALL, 0).unwrap().passed());
    }

    #[test]
    fn tie_break_schedules_cover_permutations() {
        let b3 = Poset::boolean_lattice(3).unwrap();
        let i = Ideal::from_labels(&b3, &["{}", "{1}", "{2}", "{3}"]).unwrap();
        let b = BierPoset::new(&b3, &i).unwrap();
        assert_eq!(tie_break_schedules(&b, 5, 4, 0).unwrap().len(), 4);
        assert_eq!(tie_break_schedules(&b, 6, 4, 0).unwrap().len(), 720);
    }

    #[test]
    fn sphere_suite_small() {
        let s = sphere_suite(3, 5, 1).unwrap();
        assert!(s.all_passed());
        assert_eq!(s.euler_characteristics, vec![0; 5]);
    }
}
