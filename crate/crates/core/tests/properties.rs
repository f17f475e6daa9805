use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nestcomb::bier::{
    canonical_building_set, check_nested_conditions, random_proper_ideal, verify_chain_bijection,
    verify_edge_subdivision, BierPoset,
};
use nestcomb::enumerate::{greedy_building_set, random_poset};
use nestcomb::io::{parse_complex, parse_poset, to_canonical_json};
use nestcomb::nested::big_cut_condition;
use nestcomb::poset::constrained_isomorphism;
use nestcomb::suite::sequence_consistent;
use nestcomb::{BuildingSet, Poset, SimplicialComplex};

fn rooted(max: usize) -> impl Strategy<Value = Poset> {
    (0..max, 0.1f64..0.7, any::<u64>()).prop_map(|(n, d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_poset(n, d, &mut rng)
            .unwrap()
            .with_least("0")
            .unwrap()
    })
}

fn bounded(max: usize) -> impl Strategy<Value = Poset> {
    rooted(max).prop_map(|p| p.with_greatest("1").unwrap())
}

fn with_building_set(max: usize) -> impl Strategy<Value = BuildingSet> {
    (rooted(max), any::<u64>()).prop_map(|(p, seed)| {
        let members = greedy_building_set(&p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        BuildingSet::new(&p, &members).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn poset_json_round_trips(p in rooted(9)) {
        prop_assert_eq!(parse_poset(&to_canonical_json(&p)).unwrap(), p);
    }

    #[test]
    fn joins_are_least_upper_bounds(p in rooted(9)) {
        for a in 0..p.len() {
            for b in 0..p.len() {
                let ub = p.upper_bounds(&[a, b]).unwrap();
                match p.join(&[a, b]).unwrap() {
                    Some(j) => prop_assert!(ub.iter().all(|&u| p.leq(j, u)) && ub.contains(&j)),
                    None => prop_assert!(ub.iter().all(|&u| ub.iter().any(|&v| !p.leq(u, v)))),
                }
            }
        }
    }

    #[test]
    fn linear_extension_respects_order(p in rooted(9)) {
        let ext = p.linear_extension();
        let pos: Vec<usize> = (0..p.len()).map(|x| ext.iter().position(|&e| e == x).unwrap()).collect();
        for (a, b) in p.covers() {
            prop_assert!(pos[a] < pos[b]);
        }
    }

    #[test]
    fn order_complex_of_rooted_poset_is_a_cone(p in rooted(9)) {
        let k = SimplicialComplex::order_complex(&p);
        prop_assert_eq!(k.euler_characteristic(), 1);
        prop_assert_eq!(k.num_faces(), p.chains().len());
        prop_assert_eq!(k.dimension(), p.length() as isize);
    }

    #[test]
    fn complex_json_round_trips(p in rooted(8)) {
        let k = SimplicialComplex::order_complex(&p);
        prop_assert_eq!(parse_complex(&to_canonical_json(&k)).unwrap(), k);
    }

    #[test]
    fn shuffled_poset_is_isomorphic(p in rooted(8), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..p.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let labels = perm.iter().map(|&i| format!("x{i}")).collect();
        let q = Poset::from_relation(labels, |a, b| p.leq(perm[a], perm[b])).unwrap();
        let iso = constrained_isomorphism(&p, &q, &[]).unwrap();
        prop_assert!(iso.is_some_and(|i| i.is_valid_between(&p, &q)));
    }

    #[test]
    fn stellar_subdivision_invariants(p in rooted(8), pick in any::<prop::sample::Index>()) {
        let k = SimplicialComplex::order_complex(&p);
        let faces: Vec<Vec<String>> = k
            .faces()
            .filter(|f| f.len() >= 2)
            .map(|f| f.iter().map(|s| s.to_string()).collect())
            .collect();
        prop_assume!(!faces.is_empty());
        let sigma = pick.get(&faces);
        let sd = k.stellar_subdivision(sigma, "new").unwrap();
        prop_assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
        prop_assert_eq!(sd.dimension(), k.dimension());
        prop_assert_eq!(sd.vertices().len(), k.vertices().len() + 1);
        prop_assert!(!sd.contains(sigma));
        prop_assert_eq!(sd.is_pure(), k.is_pure());
    }

    #[test]
    fn cone_is_contractible(p in rooted(8)) {
        let k = SimplicialComplex::order_complex(&p);
        let c = k.cone(&k, "apex").unwrap();
        prop_assert_eq!(c.euler_characteristic(), 1);
        prop_assert_eq!(c.dimension(), k.dimension() + 1);
    }

    #[test]
    fn nested_complex_contains_vertices(g in with_building_set(8)) {
        let k = g.nested_complex();
        prop_assert!(k.contains::<&str>(&[]));
        for l in g.member_labels() {
            prop_assert!(k.contains(&[l]));
        }
        prop_assert_eq!(k, g.nested_complex_by_subsets().unwrap());
    }

    #[test]
    fn maximal_building_set_gives_order_complex(p in rooted(9)) {
        let g = BuildingSet::maximal(&p).unwrap();
        prop_assert_eq!(
            g.nested_complex(),
            SimplicialComplex::order_complex(&p.above_least().unwrap())
        );
    }

    #[test]
    fn every_extension_is_subdivision_or_cone(g in with_building_set(9)) {
        for x in g.extension_candidates() {
            let r = g.extension_step(x).unwrap();
            prop_assert!(r.equal, "adding {} ({:?})", r.x, r.case);
        }
    }

    #[test]
    fn big_cut_condition_makes_factors_nested(g in with_building_set(9)) {
        prop_assume!(big_cut_condition(g.poset(), g.members()).unwrap());
        for x in 0..g.poset().len() {
            prop_assert!(g.is_nested(g.factors(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn sequences_are_consistent(g in with_building_set(8)) {
        let r = g.subdivision_sequence().unwrap();
        prop_assert!(sequence_consistent(&r));
    }

    #[test]
    fn bier_claims_hold(p in bounded(7), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ideal = random_proper_ideal(&p, 0.4, &mut rng).unwrap();
        let b = BierPoset::new(&p, &ideal).unwrap();
        let g = canonical_building_set(&b).unwrap();
        prop_assert!(check_nested_conditions(&b, &g, seed).unwrap().passed());
        prop_assert!(verify_chain_bijection(&b, &g).unwrap().bijective);
        prop_assert!(verify_edge_subdivision(&p, &ideal).unwrap().passed());
        let seq = g.building_set().subdivision_sequence().unwrap();
        prop_assert!(seq.passed() && seq.all_subdivisions());
    }

    #[test]
    fn relabel_round_trips(p in rooted(8)) {
        let k = SimplicialComplex::order_complex(&p);
        let there: BTreeMap<String, String> =
            k.vertices().iter().map(|v| (v.clone(), format!("v_{v}"))).collect();
        let back: BTreeMap<String, String> = there.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        prop_assert_eq!(k.relabel(&there).unwrap().relabel(&back).unwrap(), k);
    }
}
