//! Exhaustive and random instance generators for the verification suites.
//!
//! Unlabelled posets are produced by repeatedly adding a new maximal element
//! over every down-closed subset and discarding isomorphic duplicates. Every
//! poset arises this way because deleting a maximal element is always
//! possible.

use std::collections::HashMap;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::nested::is_building_set;
use crate::poset::{constrained_isomorphism, Ideal, Poset};

/// Label of an adjoined least element.
pub const BOTTOM_LABEL: &str = "0";
/// Label of an adjoined greatest element.
pub const TOP_LABEL: &str = "1";

const MAX_GENERATED: usize = 8;
const MAX_BUILDING_CANDIDATES: usize = 20;

fn element_label(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

fn from_down_masks(downs: &[u32]) -> Result<Poset> {
    let labels = (0..downs.len()).map(element_label).collect();
    Poset::from_relation(labels, |a, b| downs[b] >> a & 1 == 1)
}

type Fingerprint = (usize, Vec<(usize, usize, usize)>);

fn fingerprint(p: &Poset) -> Fingerprint {
    let mut f = p.fingerprints();
    f.sort_unstable();
    (p.covers().len(), f)
}

/// Collects posets, keeping one representative per isomorphism class.
#[derive(Default)]
struct ClassSet {
    buckets: HashMap<Fingerprint, Vec<usize>>,
    reps: Vec<Poset>,
}

impl ClassSet {
    fn insert(&mut self, p: Poset) -> Result<bool> {
        let bucket = self.buckets.entry(fingerprint(&p)).or_default();
        for &k in bucket.iter() {
            if constrained_isomorphism(&p, &self.reps[k], &[])?.is_some() {
                return Ok(false);
            }
        }
        bucket.push(self.reps.len());
        self.reps.push(p);
        Ok(true)
    }
}

/// One representative of every isomorphism class of posets on `n` elements,
/// labelled `a, b, …` along a linear extension.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_GENERATED {
        return Err(Error::TooLarge(format!(
            "{n} elements (limit {MAX_GENERATED})"
        )));
    }
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for k in 0..n {
        let mut classes = ClassSet::default();
        let mut next = Vec::new();
        for downs in &layer {
            for d in 0u32..1 << k {
                let closed = (0..k).all(|i| d >> i & 1 == 0 || downs[i] & !d == 0);
                if !closed {
                    continue;
                }
                let mut grown = downs.clone();
                grown.push(d | 1 << k);
                if classes.insert(from_down_masks(&grown)?)? {
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|d| from_down_masks(d)).collect()
}

/// Posets with a least element on `1..=max_elements` elements, up to
/// isomorphism.
pub fn posets_with_least(max_elements: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 0..max_elements {
        for p in posets_up_to_iso(n)? {
            out.push(p.with_least(BOTTOM_LABEL)?);
        }
    }
    Ok(out)
}

/// Bounded posets on `2..=max_elements` elements, up to isomorphism.
pub fn bounded_posets(max_elements: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 0..max_elements.saturating_sub(1) {
        for p in posets_up_to_iso(n)? {
            out.push(p.with_least(BOTTOM_LABEL)?.with_greatest(TOP_LABEL)?);
        }
    }
    Ok(out)
}

/// Every proper ideal of a poset with a least element, once each.
pub fn proper_ideals(p: &Poset) -> Result<Vec<Ideal>> {
    let zero = p.least().ok_or(Error::NoLeastElement)?;
    let one = p.greatest();
    let candidates: Vec<usize> = (0..p.len()).filter(|&x| Some(x) != one).collect();
    let mut out = Vec::new();
    let mut error = None;
    // Ideals correspond to their antichains of maximal elements.
    let _ = p.visit_antichains(&candidates, |a| {
        let mut members = p.down_set(a[0]).clone();
        for &x in &a[1..] {
            members.union_with(p.down_set(x));
        }
        match Ideal::new(p, &members.ones().collect::<Vec<_>>()) {
            Ok(i) => {
                out.push(i);
                ControlFlow::Continue(())
            }
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    match error {
        Some(e) => Err(e),
        None => {
            debug_assert!(out.iter().any(|i| i.members() == [zero]));
            Ok(out)
        }
    }
}

/// Every building set of `p`, as sorted member lists.
pub fn all_building_sets(p: &Poset) -> Result<Vec<Vec<usize>>> {
    let zero = p.least().ok_or(Error::NoLeastElement)?;
    let rest: Vec<usize> = (0..p.len()).filter(|&x| x != zero).collect();
    if rest.len() > MAX_BUILDING_CANDIDATES {
        return Err(Error::TooLarge(format!(
            "{} candidate members (limit {MAX_BUILDING_CANDIDATES})",
            rest.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << rest.len() {
        let members: Vec<usize> = (0..rest.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| rest[i])
            .collect();
        if is_building_set(p, &members)? {
            out.push(members);
        }
    }
    Ok(out)
}

/// Starts from `P_{>0̂}`, visits the elements in random order and tries to
/// drop each with probability one half, keeping a drop only when the rest is
/// still a building set. A sampling heuristic: the result is a building
/// set but need not be minimal.
pub fn greedy_building_set<R: Rng>(p: &Poset, rng: &mut R) -> Result<Vec<usize>> {
    let zero = p.least().ok_or(Error::NoLeastElement)?;
    let mut members: Vec<usize> = (0..p.len()).filter(|&x| x != zero).collect();
    let mut order = members.clone();
    order.shuffle(rng);
    for x in order {
        if rng.random_bool(0.5) {
            continue;
        }
        let trial: Vec<usize> = members.iter().copied().filter(|&m| m != x).collect();
        if is_building_set(p, &trial)? {
            members = trial;
        }
    }
    Ok(members)
}

/// A random labelled poset on `n` elements: each pair `i < j` is related
/// with probability `density` before transitive closure.
pub fn random_poset<R: Rng>(n: usize, density: f64, rng: &mut R) -> Result<Poset> {
    if n > 26 {
        return Err(Error::TooLarge(format!("{n} elements (limit 26)")));
    }
    let mut downs: Vec<u32> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = 1u32 << j;
        for (i, &di) in downs.iter().enumerate() {
            if rng.random_bool(density) {
                d |= di | 1 << i;
            }
        }
        downs.push(d);
    }
    from_down_masks(&downs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| posets_up_to_iso(n).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn bounded_and_rooted() {
        assert_eq!(posets_with_least(3).unwrap().len(), 1 + 1 + 2);
        let b = bounded_posets(4).unwrap();
        assert_eq!(b.len(), 1 + 1 + 2);
        assert!(b.iter().all(Poset::is_bounded));
    }

    #[test]
    fn ideals_of_diamond() {
        let d = Poset::from_covers(
            &["z", "a", "b", "t"],
            &[("z", "a"), ("z", "b"), ("a", "t"), ("b", "t")],
        )
        .unwrap();
        assert_eq!(proper_ideals(&d).unwrap().len(), 4);
    }

    #[test]
    fn building_sets_of_chain() {
        let c3 = Poset::chain(&["z", "m", "t"]).unwrap();
        let all = all_building_sets(&c3).unwrap();
        assert_eq!(all, vec![vec![1, 2]]);
    }

    #[test]
    fn random_poset_is_seeded() {
        let a = random_poset(7, 0.3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = random_poset(7, 0.3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn greedy_sets_are_building_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in posets_with_least(5).unwrap() {
            let g = greedy_building_set(&p, &mut rng).unwrap();
            assert!(is_building_set(&p, &g).unwrap());
        }
    }
}
