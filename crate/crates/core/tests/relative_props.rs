mod common;

use std::sync::Arc;

use plumbing_core::brute::{brute_dominant, brute_h0_relative, brute_h1_oz, brute_h1_relative, brute_nested};
use plumbing_core::corpus;
use plumbing_core::generic::{h1_generic_bundle, h1_generic_cycle};
use plumbing_core::opt::{classify, min_delta, Classification};
use plumbing_core::relative::{
    h0_relative_bundle, h1_oz_relgen, h1_relative_bundle, relative_dominant, relatively_rational, relgen_natural,
    san_member, Hypothesis, SubStructure, TowerSpec, Twist,
};
use plumbing_core::{Cycle, Lattice, SearchOptions, VertexSet};
use proptest::prelude::*;

fn opts() -> SearchOptions {
    SearchOptions::sequential()
}

fn oracle_z1(z: &Cycle, l: &plumbing_core::ChernClass, sub: &SubStructure) -> u64 {
    sub.oracle.evaluate(&sub.z1(z), &Twist::of(l)).unwrap()
}

fn sub_is_rational(lat: &Lattice, v1: &VertexSet) -> bool {
    v1.is_empty() || {
        let (sublat, _) = lat.induced(v1);
        classify(&sublat, &opts()).unwrap() == Classification::Rational
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn empty_sub_reduces_to_generic(inst in common::instance(5, 3, 3)) {
        let l = inst.class();
        let sub = SubStructure::empty(inst.lat.len());
        let rel = h1_relative_bundle(&inst.lat, &inst.z, &l, &sub, &opts()).unwrap();
        let gen = h1_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap();
        prop_assert_eq!(rel.h1, gen.h1);
        prop_assert_eq!(rel.argmin, gen.argmin);
    }

    #[test]
    fn full_sub_is_self_consistent(inst in common::instance(4, 2, 2)) {
        let l = inst.class();
        let sub = SubStructure::generic(&inst.lat, inst.lat.full_set());
        let rel = h1_relative_bundle(&inst.lat, &inst.z, &l, &sub, &opts()).unwrap();
        prop_assert_eq!(rel.h1, oracle_z1(&inst.z, &l, &sub));
        prop_assert!(rel.argmin.is_zero());
        let gen = h1_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap();
        prop_assert_eq!(rel.h1, gen.h1);
    }

    #[test]
    fn optimized_matches_brute(inst in common::instance(4, 3, 2)) {
        let (lat, l, sub) = (&inst.lat, inst.class(), inst.generic_sub());
        let h1 = h1_relative_bundle(lat, &inst.z, &l, &sub, &opts()).unwrap();
        prop_assert_eq!(h1.h1, brute_h1_relative(lat, &inst.z, &l, &sub).unwrap().0);
        let h0 = h0_relative_bundle(lat, &inst.z, &l, &sub, &opts()).unwrap();
        prop_assert_eq!(h0, brute_h0_relative(lat, &inst.z, &l, &sub).unwrap());
        let dom = relative_dominant(lat, &inst.z, &l, &sub, &opts()).unwrap();
        let brute = brute_dominant(lat, &inst.z, &l, &sub).unwrap();
        prop_assert_eq!((dom.dominant, dom.margin), (brute.dominant, brute.margin));
        prop_assert_eq!(dom.witness.is_some(), !dom.dominant);
        if let Some(w) = &dom.witness {
            prop_assert!(!w.is_zero() && w.le(&inst.z));
        }
        let oz = h1_oz_relgen(lat, &inst.z, &sub, &opts()).unwrap();
        prop_assert_eq!(oz, brute_h1_oz(lat, &inst.z, &sub).unwrap());
    }

    #[test]
    fn bounds_and_dominance_link(inst in common::instance(5, 3, 3)) {
        let (lat, l, sub) = (&inst.lat, inst.class(), inst.generic_sub());
        let h1 = h1_relative_bundle(lat, &inst.z, &l, &sub, &opts()).unwrap().h1 as i64;
        let at_z1 = oracle_z1(&inst.z, &l, &sub) as i64;
        prop_assert!(h1 >= at_z1);
        let z2 = inst.z.sub(&sub.z1(&inst.z));
        let base: Vec<i64> = l.pairings().iter().map(|p| -p).collect();
        let inner = min_delta(lat, &base, z2.coeffs(), &opts()).unwrap().delta;
        prop_assert!(h1 >= at_z1 - inner);
        if relative_dominant(lat, &inst.z, &l, &sub, &opts()).unwrap().dominant {
            prop_assert_eq!(h1, at_z1);
        }
    }

    #[test]
    fn rational_sub_needs_no_correction(inst in common::instance(5, 3, 3)) {
        prop_assume!(sub_is_rational(&inst.lat, &inst.v1));
        let l = inst.class();
        let rel = h1_relative_bundle(&inst.lat, &inst.z, &l, &inst.generic_sub(), &opts()).unwrap();
        let gen = h1_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap();
        prop_assert_eq!(rel.h1, gen.h1);
    }

    #[test]
    fn relatively_rational_fixes_h1(inst in common::instance(4, 3, 0)) {
        let z = inst.z.join(&inst.lat.reduced_cycle());
        let sub = inst.generic_sub();
        if relatively_rational(&inst.lat, &z, &sub, &opts()).unwrap().dominant {
            let oz = h1_oz_relgen(&inst.lat, &z, &sub, &opts()).unwrap();
            prop_assert_eq!(oz, oracle_z1(&z, &inst.lat.zero_class(), &sub));
            prop_assert_eq!(oz, h1_generic_cycle(&inst.lat, &sub.z1(&z), &opts()).unwrap());
        }
    }

    #[test]
    fn relgen_matches_nested_brute(
        inst in common::instance(4, 2, 0),
        assignment in prop::collection::vec(0usize..3, 4),
        weights in prop::collection::vec(0i64..=2, 4),
    ) {
        let n = inst.lat.len();
        let mut layers: Vec<VertexSet> = (0..3)
            .map(|k| VertexSet::from_indices(n, (0..n).filter(|&v| assignment[v] == k)))
            .filter(|s| !s.is_empty())
            .collect();
        layers.sort_by_key(|s| s.iter().next());
        let tower = TowerSpec::new(layers, n).unwrap();
        let l = inst.lat.class_from_estar(&weights[..n]).unwrap().neg();
        let k = tower.len();
        match relgen_natural(&inst.lat, &inst.z, &l, &tower, k, Hypothesis::Nonzero, &opts()) {
            Ok(r) => prop_assert_eq!(r.h1, brute_nested(&inst.lat, &tower, &inst.z, &l).unwrap()),
            Err(e) => prop_assert!(e.to_string().starts_with("hypothesis not satisfied"), "{}", e),
        }
    }
}

#[test]
fn semigroup_is_min_closed_in_each_class() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for name in ["a2", "d4", "star237"] {
        let lat = Arc::new(corpus::lattice(name).unwrap());
        let n = lat.len();
        let sub = SubStructure::empty(n);
        assert!(san_member(&lat, &lat.zero_class(), &sub, &opts()).unwrap().member);
        let mut checked = 0;
        while checked < 20 {
            let b: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            let s1 = lat.class_from_estar(&b).unwrap();
            let m = Cycle::new((0..n).map(|_| rng.gen_range(-2..=2)).collect());
            let s2 = s1.add(&lat.class_of_cycle(&m));
            let m1 = san_member(&lat, &s1, &sub, &opts()).unwrap().member;
            let m2 = san_member(&lat, &s2, &sub, &opts()).unwrap().member;
            for (s, member) in [(&s1, m1), (&s2, m2)] {
                assert!(!member || lat.lipman_contains(s));
            }
            if m1 && m2 {
                let meet = s1.add(&lat.class_of_cycle(&m.meet(&Cycle::zero(n))));
                assert!(san_member(&lat, &meet, &sub, &opts()).unwrap().member, "{name}: {b:?} {m:?}");
                checked += 1;
            }
        }
    }
}
