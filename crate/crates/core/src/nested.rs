//! Building sets of posets with a least element, their nested set
//! complexes, and the effect of enlarging the building set by one element.
//!
//! A subset `G` of `P_{>0̂}` is a building set when every lower interval
//! `[0̂, x]` is isomorphic to the product of the intervals `[0̂, x_i]` over the
//! factors `F_G(x) = max G_{≤x}`, with each unit tuple sent to its `x_i`. A
//! subset `N ⊆ G` is nested when every antichain `A ⊆ N` with `|A| ≥ 2` has a
//! join that lies outside `G`. Nestedness is not decided by pairs: all
//! antichains are checked.
//!
//! Adding an element `x` maximal among the non-members turns `N(P, G)` into
//! either the stellar subdivision at `F_G(x)` (when `F_G(x)` is nested) or
//! the cone over the subcomplex induced by the members comparable to `x`.
//! [`BuildingSet::extension_step`] builds the predicted complex, naming the
//! new vertex after `x`, and compares it with the recomputed one.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::{constrained_isomorphism, BigCut, ConstrainedIso, Poset};
use crate::simplicial::SimplicialComplex;

/// A validated building set together with its factor sets and the pinned
/// product isomorphisms witnessing validity.
#[derive(Clone, Debug)]
pub struct BuildingSet {
    poset: Poset,
    zero: usize,
    members: Vec<usize>,
    member_set: FixedBitSet,
    factors: Vec<Vec<usize>>,
    isos: Vec<ConstrainedIso>,
}

/// Outcome of [`check_building_set`].
#[derive(Clone, Debug)]
pub enum BuildingCheck {
    Valid(BuildingSet),
    /// `[0̂, element]` is not the pinned product over `factors`.
    Invalid {
        element: usize,
        factors: Vec<usize>,
    },
}

impl BuildingCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, BuildingCheck::Valid(_))
    }
}

/// `max {g ∈ G : g ≤ x}`.
fn factors_in(poset: &Poset, members: &FixedBitSet, x: usize) -> Vec<usize> {
    let mut below = poset.down_set(x).clone();
    below.intersect_with(members);
    poset.maximal_of(&below)
}

fn pinned_product_iso(
    poset: &Poset,
    zero: usize,
    x: usize,
    factors: &[usize],
) -> Result<Option<ConstrainedIso>> {
    let whole = poset.interval(zero, x)?;
    let parts = factors
        .iter()
        .map(|&f| poset.interval(zero, f))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = parts.iter().map(|p| p.carrier().len()).collect();
    // Cheap rejection before materialising the product.
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    if total != whole.carrier().len() {
        return Ok(None);
    }
    let carriers: Vec<&Poset> = parts.iter().map(|p| p.carrier()).collect();
    let product = Poset::product(&carriers);
    let bottoms: Vec<usize> = parts
        .iter()
        .map(|p| p.local_index(zero).expect("interval contains its bottom"))
        .collect();
    let pins: Vec<(usize, usize)> = parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            let mut coords = bottoms.clone();
            coords[i] = part
                .local_index(factors[i])
                .expect("interval contains its top");
            let unit = crate::poset::tuple_index(&sizes, &coords);
            let image = whole.local_index(factors[i]).expect("factor lies below x");
            (unit, image)
        })
        .collect();
    constrained_isomorphism(&product, whole.carrier(), &pins)
}

/// Decides whether `members` is a building set of `poset`.
///
/// Errors when the poset has no least element or a member is the least
/// element.
pub fn check_building_set(poset: &Poset, members: &[usize]) -> Result<BuildingCheck> {
    poset.check_all(members)?;
    let zero = poset.least().ok_or(Error::NoLeastElement)?;
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.binary_search(&zero).is_ok() {
        return Err(Error::InvalidBuildingSet(format!(
            "contains the least element `{}`",
            poset.label(zero)
        )));
    }
    let member_set = poset.set_of(&sorted);
    let mut factors = Vec::with_capacity(poset.len());
    let mut isos = Vec::with_capacity(poset.len());
    for x in 0..poset.len() {
        let f = factors_in(poset, &member_set, x);
        match pinned_product_iso(poset, zero, x, &f)? {
            Some(iso) => isos.push(iso),
            None => {
                return Ok(BuildingCheck::Invalid {
                    element: x,
                    factors: f,
                })
            }
        }
        factors.push(f);
    }
    Ok(BuildingCheck::Valid(BuildingSet {
        poset: poset.clone(),
        zero,
        members: sorted,
        member_set,
        factors,
        isos,
    }))
}

pub fn is_building_set(poset: &Poset, members: &[usize]) -> Result<bool> {
    Ok(check_building_set(poset, members)?.is_valid())
}

/// The first big cut whose upper-bound set is not contained in `members`.
pub fn big_cut_outside(poset: &Poset, members: &[usize]) -> Result<Option<BigCut>> {
    poset.check_all(members)?;
    let set = poset.set_of(members);
    Ok(poset
        .big_cuts()
        .into_iter()
        .find(|cut| cut.upper_bounds.iter().any(|&u| !set.contains(u))))
}

/// Whether every big cut's upper-bound set lies inside `members`. When this
/// holds for a building set, every factor set is nested and each extension
/// step is a stellar subdivision.
pub fn big_cut_condition(poset: &Poset, members: &[usize]) -> Result<bool> {
    Ok(big_cut_outside(poset, members)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepCase {
    Subdivision,
    Cone,
}

/// One extension `G -> G ∪ {x}` together with both complexes.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub x: String,
    pub case: StepCase,
    #[serde(rename = "F")]
    pub factors: Vec<String>,
    /// `C_G(x) = G_{<x} ∪ G_{>x}`; only for the cone case.
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub cone_base: Option<Vec<String>>,
    pub constructed: SimplicialComplex,
    pub recomputed: SimplicialComplex,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub members: Vec<String>,
    pub big_cut_condition: bool,
    pub steps: Vec<StepReport>,
    pub final_complex: SimplicialComplex,
    pub final_equals_order_complex: bool,
}

impl SequenceReport {
    pub fn all_subdivisions(&self) -> bool {
        self.steps.iter().all(|s| s.case == StepCase::Subdivision)
    }

    pub fn passed(&self) -> bool {
        self.final_equals_order_complex && self.steps.iter().all(|s| s.equal)
    }
}

impl BuildingSet {
    /// Validates `members`; an invalid set is an [`Error::InvalidBuildingSet`]
    /// naming the failing element.
    pub fn new(poset: &Poset, members: &[usize]) -> Result<Self> {
        match check_building_set(poset, members)? {
            BuildingCheck::Valid(g) => Ok(g),
            BuildingCheck::Invalid { element, factors } => Err(Error::InvalidBuildingSet(format!(
                "[{}, {}] is not the product over factors {:?}",
                poset.label(poset.least().expect("checked")),
                poset.label(element),
                poset.labels_of(&factors)
            ))),
        }
    }

    pub fn from_labels<S: AsRef<str>>(poset: &Poset, labels: &[S]) -> Result<Self> {
        BuildingSet::new(poset, &poset.indices_of(labels)?)
    }

    /// `P_{>0̂}`, the largest building set.
    pub fn maximal(poset: &Poset) -> Result<Self> {
        let zero = poset.least().ok_or(Error::NoLeastElement)?;
        let rest: Vec<usize> = (0..poset.len()).filter(|&i| i != zero).collect();
        BuildingSet::new(poset, &rest)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn least(&self) -> usize {
        self.zero
    }

    /// Members in ascending index order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn member_labels(&self) -> Vec<String> {
        self.poset.labels_of(&self.members)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member_set.contains(x)
    }

    /// `F_G(x)`.
    pub fn factors(&self, x: usize) -> Result<&[usize]> {
        self.poset.check(x)?;
        Ok(&self.factors[x])
    }

    /// The pinned isomorphism from the product of the factor intervals onto
    /// `[0̂, x]`.
    pub fn product_iso(&self, x: usize) -> Result<&ConstrainedIso> {
        self.poset.check(x)?;
        Ok(&self.isos[x])
    }

    fn fails(&self, antichain: &[usize]) -> bool {
        match self.poset.join(antichain).expect("indices checked") {
            Some(j) => self.contains(j),
            None => true,
        }
    }

    /// An antichain of `set` violating nestedness, if any.
    pub fn nested_witness(&self, set: &[usize]) -> Result<Option<Vec<usize>>> {
        self.poset.check_all(set)?;
        if let Some(&x) = set.iter().find(|&&x| !self.contains(x)) {
            return Err(Error::NotInBuildingSet {
                element: self.poset.label(x).to_owned(),
            });
        }
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let found = self.poset.visit_antichains(&set, |a| {
            if a.len() >= 2 && self.fails(a) {
                ControlFlow::Break(a.to_vec())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(match found {
            ControlFlow::Break(w) => Some(w),
            ControlFlow::Continue(()) => None,
        })
    }

    pub fn is_nested(&self, set: &[usize]) -> Result<bool> {
        Ok(self.nested_witness(set)?.is_none())
    }

    /// Whether `current ∪ {g}` stays nested, given that `current` is.
    /// Only antichains through `g` need checking.
    fn extends_nested(&self, current: &[usize], g: usize) -> bool {
        let others: Vec<usize> = current
            .iter()
            .copied()
            .filter(|&n| !self.poset.comparable(n, g))
            .collect();
        let mut scratch = Vec::with_capacity(others.len() + 1);
        let verdict = self.poset.visit_antichains(&others, |b| {
            scratch.clear();
            scratch.extend_from_slice(b);
            scratch.push(g);
            if self.fails(&scratch) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        verdict.is_continue()
    }

    fn grow(&self, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for k in start..self.members.len() {
            let g = self.members[k];
            if self.extends_nested(current, g) {
                current.push(g);
                out.push(current.clone());
                self.grow(k + 1, current, out);
                current.pop();
            }
        }
    }

    /// `N(P, G)` built by depth-first extension of nested sets.
    pub fn nested_complex(&self) -> SimplicialComplex {
        let mut faces = vec![Vec::new()];
        self.grow(0, &mut Vec::new(), &mut faces);
        SimplicialComplex::canonical(self.poset.labels().to_vec(), faces)
    }

    /// `N(P, G)` by testing every subset of `G`; a reference for
    /// [`BuildingSet::nested_complex`].
    pub fn nested_complex_by_subsets(&self) -> Result<SimplicialComplex> {
        let m = self.members.len();
        if m > 20 {
            return Err(Error::TooLarge(format!(
                "{m} members for subset enumeration"
            )));
        }
        let mut faces = Vec::new();
        for mask in 0u32..(1 << m) {
            let subset: Vec<usize> = (0..m)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.members[k])
                .collect();
            if self.is_nested(&subset)? {
                faces.push(subset);
            }
        }
        Ok(SimplicialComplex::canonical(
            self.poset.labels().to_vec(),
            faces,
        ))
    }

    /// `max (P_{>0̂} \ G)`: the elements that may be added next.
    pub fn extension_candidates(&self) -> Vec<usize> {
        let mut outside = FixedBitSet::with_capacity(self.poset.len());
        for x in 0..self.poset.len() {
            if x != self.zero && !self.contains(x) {
                outside.insert(x);
            }
        }
        self.poset.maximal_of(&outside)
    }

    /// `C_G(x) = G_{<x} ∪ G_{>x}`.
    pub fn comparable_members(&self, x: usize) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&g| g != x && self.poset.comparable(g, x))
            .collect()
    }

    /// Performs one extension and returns the report with the enlarged
    /// building set.
    pub fn extend(&self, x: usize) -> Result<(StepReport, BuildingSet)> {
        self.poset.check(x)?;
        let label = self.poset.label(x).to_owned();
        if x == self.zero || self.contains(x) {
            return Err(Error::Precondition(format!(
                "`{label}` must be a non-member above the least element"
            )));
        }
        if let Some(y) = self
            .poset
            .up_set(x)
            .ones()
            .find(|&y| y != x && !self.contains(y))
        {
            return Err(Error::Precondition(format!(
                "`{label}` is not maximal outside the building set (`{}` lies above it)",
                self.poset.label(y)
            )));
        }

        let current = self.nested_complex();
        let factors = self.factors[x].clone();
        let factor_labels = self.poset.labels_of(&factors);
        let (case, cone_base, constructed) = if self.is_nested(&factors)? {
            let sd = current.stellar_subdivision(&factor_labels, &label)?;
            (StepCase::Subdivision, None, sd)
        } else {
            let base = self.poset.labels_of(&self.comparable_members(x));
            let sub = current.induced_subcomplex(&base)?;
            (StepCase::Cone, Some(base), current.cone(&sub, &label)?)
        };

        let mut enlarged = self.members.clone();
        enlarged.push(x);
        let next = match check_building_set(&self.poset, &enlarged)? {
            BuildingCheck::Valid(g) => g,
            BuildingCheck::Invalid { element, .. } => {
                return Err(Error::Falsified {
                    claim: "adding a maximal non-member keeps a building set".into(),
                    witness: format!(
                        "adding `{label}` breaks the product decomposition at `{}`",
                        self.poset.label(element)
                    ),
                })
            }
        };
        let recomputed = next.nested_complex();
        let equal = constructed.equals_labelled(&recomputed);
        let report = StepReport {
            x: label,
            case,
            factors: factor_labels,
            cone_base,
            constructed,
            recomputed,
            equal,
        };
        Ok((report, next))
    }

    pub fn extension_step(&self, x: usize) -> Result<StepReport> {
        Ok(self.extend(x)?.0)
    }

    /// [`BuildingSet::extension_step`], failing with [`Error::Falsified`]
    /// when the predicted and recomputed complexes differ.
    pub fn verify_extension_step(&self, x: usize) -> Result<StepReport> {
        let report = self.extension_step(x)?;
        if !report.equal {
            return Err(Error::Falsified {
                claim: "subdivision/cone dichotomy".into(),
                witness: format!("extension by `{}` ({:?})", report.x, report.case),
            });
        }
        Ok(report)
    }

    /// Grows `G` to `P_{>0̂}`, adding the remaining elements in decreasing
    /// order of the linear extension so each one is maximal when added.
    pub fn subdivision_sequence(&self) -> Result<SequenceReport> {
        let order: Vec<usize> = self
            .poset
            .linear_extension()
            .into_iter()
            .rev()
            .filter(|&x| x != self.zero && !self.contains(x))
            .collect();
        let mut steps = Vec::with_capacity(order.len());
        let mut g = self.clone();
        for x in order {
            let (report, next) = g.extend(x)?;
            steps.push(report);
            g = next;
        }
        let final_complex = g.nested_complex();
        let target = SimplicialComplex::order_complex(&self.poset.above_least()?);
        Ok(SequenceReport {
            members: self.member_labels(),
            big_cut_condition: big_cut_condition(&self.poset, &self.members)?,
            steps,
            final_equals_order_complex: final_complex == target,
            final_complex,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Poset {
        Poset::from_covers(&["z", "m", "t"], &[("z", "m"), ("m", "t")]).unwrap()
    }

    fn diamond() -> Poset {
        Poset::from_covers(
            &["z", "a", "b", "t"],
            &[("z", "a"), ("z", "b"), ("a", "t"), ("b", "t")],
        )
        .unwrap()
    }

    fn bowtie() -> Poset {
        Poset::from_covers(
            &["z", "a", "b", "c", "d"],
            &[
                ("z", "a"),
                ("z", "b"),
                ("a", "c"),
                ("b", "c"),
                ("a", "d"),
                ("b", "d"),
            ],
        )
        .unwrap()
    }

    fn g(p: &Poset, ls: &[&str]) -> BuildingSet {
        BuildingSet::from_labels(p, ls).unwrap()
    }

    fn ix(p: &Poset, ls: &[&str]) -> Vec<usize> {
        p.indices_of(ls).unwrap()
    }

    fn cx(vertices: &[&str], facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(vertices, facets).unwrap()
    }

    #[test]
    fn factor_sets() {
        let d = diamond();
        let gd = g(&d, &["a", "b"]);
        assert_eq!(d.labels_of(gd.factors(3).unwrap()), ["a", "b"]);
        assert!(gd.factors(0).unwrap().is_empty());
        assert_eq!(d.labels_of(gd.factors(1).unwrap()), ["a"]);

        let w = bowtie();
        let gw = g(&w, &["a", "b", "c"]);
        assert_eq!(w.labels_of(gw.factors(4).unwrap()), ["a", "b"]);
    }

    #[test]
    fn building_set_examples() {
        let d = diamond();
        assert!(is_building_set(&d, &ix(&d, &["a", "b"])).unwrap());
        assert!(BuildingSet::maximal(&d).is_ok());
        let w = bowtie();
        match check_building_set(&w, &ix(&w, &["a", "c", "d"])).unwrap() {
            BuildingCheck::Invalid { element, factors } => {
                assert_eq!(w.label(element), "b");
                assert!(factors.is_empty());
            }
            BuildingCheck::Valid(_) => panic!("expected failure at b"),
        }
        // In a chain only the maximal building set works.
        let c = c3();
        assert!(!is_building_set(&c, &ix(&c, &["m"])).unwrap());
        assert!(is_building_set(&c, &ix(&c, &["m", "t"])).unwrap());
    }

    #[test]
    fn building_set_errors() {
        let d = diamond();
        assert!(matches!(
            check_building_set(&d, &[0, 1]),
            Err(Error::InvalidBuildingSet(_))
        ));
        let anti = Poset::antichain(&["x", "y"]).unwrap();
        assert_eq!(
            check_building_set(&anti, &[0]).unwrap_err(),
            Error::NoLeastElement
        );
    }

    #[test]
    fn singleton_poset_with_empty_building_set() {
        let p = Poset::chain(&["z"]).unwrap();
        let g = BuildingSet::new(&p, &[]).unwrap();
        assert_eq!(g.nested_complex(), SimplicialComplex::void());
        assert!(g.subdivision_sequence().unwrap().passed());
    }

    #[test]
    fn nested_examples() {
        let d = diamond();
        assert!(g(&d, &["a", "b"]).is_nested(&ix(&d, &["a", "b"])).unwrap());
        let gt = g(&d, &["a", "b", "t"]);
        assert_eq!(
            gt.nested_witness(&ix(&d, &["a", "b"])).unwrap(),
            Some(ix(&d, &["a", "b"]))
        );
        let w = bowtie();
        let gw = BuildingSet::maximal(&w).unwrap();
        assert!(!gw.is_nested(&ix(&w, &["a", "b"])).unwrap());
        assert!(gw.is_nested(&ix(&w, &["a", "c"])).unwrap());
        assert!(matches!(
            g(&d, &["a", "b"]).is_nested(&ix(&d, &["t"])),
            Err(Error::NotInBuildingSet { .. })
        ));
    }

    #[test]
    fn nested_complex_examples() {
        let d = diamond();
        assert_eq!(
            g(&d, &["a", "b"]).nested_complex(),
            cx(&["a", "b"], &[&["a", "b"]])
        );
        let w = bowtie();
        assert_eq!(
            g(&w, &["a", "b", "c"]).nested_complex(),
            cx(&["a", "b", "c"], &[&["a", "c"], &["b", "c"]])
        );
        for p in [
            c3(),
            d.clone(),
            w.clone(),
            Poset::boolean_lattice(3).unwrap(),
        ] {
            let gmax = BuildingSet::maximal(&p).unwrap();
            let delta = SimplicialComplex::order_complex(&p.above_least().unwrap());
            assert_eq!(gmax.nested_complex(), delta);
            assert_eq!(gmax.nested_complex_by_subsets().unwrap(), delta);
        }
    }

    #[test]
    fn subdivision_step_on_diamond() {
        let d = diamond();
        let r = g(&d, &["a", "b"]).verify_extension_step(3).unwrap();
        assert_eq!(r.case, StepCase::Subdivision);
        assert_eq!(r.factors, ["a", "b"]);
        assert_eq!(
            r.recomputed,
            cx(&["a", "b", "t"], &[&["a", "t"], &["b", "t"]])
        );
    }

    #[test]
    fn cone_step_on_bowtie() {
        let w = bowtie();
        let r = g(&w, &["a", "b", "c"]).verify_extension_step(4).unwrap();
        assert_eq!(r.case, StepCase::Cone);
        assert_eq!(
            r.cone_base.as_deref(),
            Some(&["a".to_string(), "b".into()][..])
        );
        let square = cx(
            &["a", "b", "c", "d"],
            &[&["a", "c"], &["b", "c"], &["a", "d"], &["b", "d"]],
        );
        assert_eq!(r.recomputed, square);
        assert_eq!(r.constructed, square);
    }

    #[test]
    fn extension_preconditions() {
        let w = bowtie();
        let gw = g(&w, &["a", "b", "c"]);
        assert!(matches!(gw.extension_step(0), Err(Error::Precondition(_))));
        assert!(matches!(gw.extension_step(1), Err(Error::Precondition(_))));
        let b3 = Poset::boolean_lattice(3).unwrap();
        let atoms = g(&b3, &["{1}", "{2}", "{3}"]);
        let pair = b3.index_of("{1,2}").unwrap();
        assert!(matches!(
            atoms.extension_step(pair),
            Err(Error::Precondition(_))
        ));
        assert_eq!(atoms.extension_candidates(), ix(&b3, &["{1,2,3}"]));
    }

    #[test]
    fn sequences() {
        let d = diamond();
        let r = g(&d, &["a", "b"]).subdivision_sequence().unwrap();
        assert_eq!(r.steps.len(), 1);
        assert!(r.all_subdivisions() && r.passed());

        let w = bowtie();
        let r = g(&w, &["a", "b", "c"]).subdivision_sequence().unwrap();
        assert_eq!(r.steps.len(), 1);
        assert_eq!(r.steps[0].case, StepCase::Cone);
        assert!(!r.big_cut_condition);
        assert!(r.passed());

        let b3 = Poset::boolean_lattice(3).unwrap();
        let r = g(&b3, &["{1}", "{2}", "{3}"])
            .subdivision_sequence()
            .unwrap();
        let added: Vec<&str> = r.steps.iter().map(|s| s.x.as_str()).collect();
        assert_eq!(added, ["{1,2,3}", "{2,3}", "{1,3}", "{1,2}"]);
        assert!(r.big_cut_condition && r.all_subdivisions() && r.passed());
    }

    #[test]
    fn big_cut_condition_examples() {
        let w = bowtie();
        assert!(!big_cut_condition(&w, &ix(&w, &["a", "b", "c"])).unwrap());
        assert!(big_cut_condition(&w, &ix(&w, &["c", "d"])).unwrap());
        let b3 = Poset::boolean_lattice(3).unwrap();
        assert!(big_cut_condition(&b3, &[]).unwrap());
    }
}
