//! Order isomorphisms subject to prescribed image pins.

use std::collections::HashMap;

use crate::error::Result;

use super::Poset;

/// An order isomorphism `source -> target` honoring a list of pins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedIso {
    mapping: Vec<usize>,
    pins: Vec<(usize, usize)>,
}

impl ConstrainedIso {
    /// `mapping()[a]` is the image of source element `a`.
    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn pins(&self) -> &[(usize, usize)] {
        &self.pins
    }

    pub fn apply(&self, a: usize) -> usize {
        self.mapping[a]
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.mapping.len()];
        for (a, &b) in self.mapping.iter().enumerate() {
            inv[b] = a;
        }
        inv
    }

    /// Checks that the mapping is a bijection which preserves and reflects
    /// the order and honors every pin.
    pub fn is_valid_between(&self, source: &Poset, target: &Poset) -> bool {
        let n = source.len();
        if target.len() != n || self.mapping.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &b in &self.mapping {
            if b >= n || std::mem::replace(&mut seen[b], true) {
                return false;
            }
        }
        let order_ok = (0..n).all(|a| {
            (0..n).all(|c| source.leq(a, c) == target.leq(self.mapping[a], self.mapping[c]))
        });
        order_ok && self.pins.iter().all(|&(a, b)| self.mapping[a] == b)
    }
}

/// Searches for an order isomorphism `source -> target` mapping each pinned
/// source element to its pinned target.
///
/// Backtracking over source elements (pins first, then a linear extension),
/// restricted to targets with the same down-set size, up-set size and
/// height. Returns `Ok(None)` when no such isomorphism exists, including
/// when the pins are contradictory.
pub fn constrained_isomorphism(
    source: &Poset,
    target: &Poset,
    pins: &[(usize, usize)],
) -> Result<Option<ConstrainedIso>> {
    for &(a, b) in pins {
        source.check(a)?;
        target.check(b)?;
    }
    let n = source.len();
    if target.len() != n {
        return Ok(None);
    }

    let fp_s = source.fingerprints();
    let fp_t = target.fingerprints();
    let mut classes: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
    for (b, fp) in fp_t.iter().enumerate() {
        classes.entry(*fp).or_default().push(b);
    }
    let mut sorted_s = fp_s.clone();
    let mut sorted_t = fp_t.clone();
    sorted_s.sort_unstable();
    sorted_t.sort_unstable();
    if sorted_s != sorted_t {
        return Ok(None);
    }

    let mut fixed: Vec<Option<usize>> = vec![None; n];
    for &(a, b) in pins {
        match fixed[a] {
            Some(prev) if prev != b => return Ok(None),
            _ => fixed[a] = Some(b),
        }
    }

    let mut order: Vec<usize> = (0..n).filter(|&a| fixed[a].is_some()).collect();
    order.extend(
        source
            .linear_extension()
            .into_iter()
            .filter(|&a| fixed[a].is_none()),
    );

    let mut search = Search {
        source,
        target,
        order: &order,
        fixed: &fixed,
        candidates: order
            .iter()
            .map(|&a| match fixed[a] {
                Some(b) => vec![b],
                None => classes.get(&fp_s[a]).cloned().unwrap_or_default(),
            })
            .collect(),
        image: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        Ok(Some(ConstrainedIso {
            mapping: search.image,
            pins: pins.to_vec(),
        }))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    source: &'a Poset,
    target: &'a Poset,
    order: &'a [usize],
    fixed: &'a [Option<usize>],
    candidates: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let a = self.order[depth];
        debug_assert!(self.fixed[a].is_none() || self.candidates[depth].len() == 1);
        for k in 0..self.candidates[depth].len() {
            let b = self.candidates[depth][k];
            if self.used[b] || !self.consistent(depth, a, b) {
                continue;
            }
            self.image[a] = b;
            self.used[b] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[b] = false;
            self.image[a] = usize::MAX;
        }
        false
    }

    fn consistent(&self, depth: usize, a: usize, b: usize) -> bool {
        self.order[..depth].iter().all(|&prev| {
            let pb = self.image[prev];
            self.source.leq(prev, a) == self.target.leq(pb, b)
                && self.source.leq(a, prev) == self.target.leq(b, pb)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Poset {
        Poset::from_covers(
            &["z", "a", "b", "t"],
            &[("z", "a"), ("z", "b"), ("a", "t"), ("b", "t")],
        )
        .unwrap()
    }

    #[test]
    fn diamond_is_square_with_pins() {
        let d = diamond();
        let c2 = Poset::chain(&["0", "1"]).unwrap();
        let sq = Poset::product(&[&c2, &c2]);
        let pins = [
            (sq.index_of("(1,0)").unwrap(), d.index_of("a").unwrap()),
            (sq.index_of("(0,1)").unwrap(), d.index_of("b").unwrap()),
        ];
        let iso = constrained_isomorphism(&sq, &d, &pins).unwrap().unwrap();
        assert!(iso.is_valid_between(&sq, &d));
        assert_eq!(iso.apply(pins[0].0), pins[0].1);
    }

    #[test]
    fn size_mismatch() {
        let c3 = Poset::chain(&["z", "m", "t"]).unwrap();
        assert!(constrained_isomorphism(&c3, &diamond(), &[])
            .unwrap()
            .is_none());
    }

    #[test]
    fn pins_can_forbid() {
        let d = diamond();
        // z must map to the bottom; pinning it to `a` is impossible.
        assert!(constrained_isomorphism(&d, &d, &[(0, 1)])
            .unwrap()
            .is_none());
        // Contradictory pins.
        assert!(constrained_isomorphism(&d, &d, &[(1, 1), (1, 2)])
            .unwrap()
            .is_none());
        // The swap automorphism.
        let swap = constrained_isomorphism(&d, &d, &[(1, 2)]).unwrap().unwrap();
        assert_eq!(swap.mapping(), &[0, 2, 1, 3]);
        assert_eq!(swap.inverse(), vec![0, 2, 1, 3]);
    }

    #[test]
    fn unknown_pin() {
        let d = diamond();
        assert!(constrained_isomorphism(&d, &d, &[(9, 0)]).is_err());
    }
}
