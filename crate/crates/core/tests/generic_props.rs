mod common;

use num_traits::ToPrimitive;
use plumbing_core::brute::{brute_min_chi, BoxIterator};
use plumbing_core::corpus;
use plumbing_core::generic::{chi_sheaf, e_z, h0_generic_bundle, h1_generic_bundle, h1_generic_cycle};
use plumbing_core::opt::{classify, Classification};
use plumbing_core::{Cycle, SearchOptions, VertexSet};
use proptest::prelude::*;

fn opts() -> SearchOptions {
    SearchOptions::sequential()
}

fn brute_min_on(lat: &plumbing_core::Lattice, z: &Cycle, from_e: bool) -> i64 {
    BoxIterator::new(z.coeffs())
        .unwrap()
        .filter(|l| !from_e || l.iter().all(|&c| c >= 1))
        .map(|l| lat.chi_cycle(&Cycle::new(l)))
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cycle_and_bundle_h1_relation(inst in common::instance(5, 3, 0)) {
        let z = inst.z.join(&inst.lat.reduced_cycle());
        let cycle = h1_generic_cycle(&inst.lat, &z, &opts()).unwrap() as i64;
        let bundle = h1_generic_bundle(&inst.lat, &z, &inst.lat.zero_class(), &opts()).unwrap().h1 as i64;
        prop_assert_eq!(cycle, 1 - brute_min_on(&inst.lat, &z, true));
        prop_assert_eq!(bundle, -brute_min_on(&inst.lat, &z, false));
        prop_assert_eq!(bundle, (cycle - 1).max(0));
    }

    #[test]
    fn bundle_h1_matches_brute_and_h0_identity(inst in common::instance(5, 3, 3)) {
        let l = inst.class();
        let r = h1_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap();
        let brute = brute_min_chi(&inst.lat, &l.neg(), &inst.z).unwrap();
        prop_assert_eq!(rational_i64(&(inst.lat.chi(&l.neg()) - brute.value)), r.h1 as i64);
        prop_assert_eq!(r.argmin, brute.argmin);
        let h0 = h0_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap() as i64;
        prop_assert_eq!(h0, chi_sheaf(&inst.lat, &inst.z, &l) + r.h1 as i64);
    }

    #[test]
    fn h1_is_monotone_in_the_box(inst in common::instance(5, 3, 3), shrink in prop::collection::vec(0i64..=3, 5)) {
        let l = inst.class();
        let smaller = Cycle::new(inst.z.coeffs().iter().zip(&shrink).map(|(c, s)| (c - s).max(0)).collect());
        let big = h1_generic_bundle(&inst.lat, &inst.z, &l, &opts()).unwrap().h1;
        let small = h1_generic_bundle(&inst.lat, &smaller, &l, &opts()).unwrap().h1;
        prop_assert!(small <= big);
    }

    #[test]
    fn ez_is_monotone_in_the_subset(inst in common::instance(5, 3, 0), extra in prop::collection::vec(any::<bool>(), 5)) {
        let n = inst.lat.len();
        let i = inst.v1.clone();
        let j = i.union(&VertexSet::from_mask(extra[..n].to_vec()));
        let small = e_z(&inst.lat, &inst.z, &i, &opts()).unwrap();
        let big = e_z(&inst.lat, &inst.z, &j, &opts()).unwrap();
        prop_assert!(small <= big, "e_Z({:?}) = {} > e_Z({:?}) = {}", i, small, j, big);
    }
}

fn rational_i64(q: &num_rational::BigRational) -> i64 {
    assert!(q.is_integer());
    q.to_integer().to_i64().unwrap()
}

#[test]
fn rational_graphs_have_no_h1_on_the_cone() {
    for name in ["a1", "a2", "an", "d4", "e6", "minus3"] {
        let lat = corpus::lattice(name).unwrap();
        assert_eq!(classify(&lat, &opts()).unwrap(), Classification::Rational);
        let n = lat.len();
        for b in BoxIterator::new(&vec![2; n]).unwrap() {
            let l = lat.class_from_estar(&b).unwrap().neg();
            for z in [vec![1; n], vec![3; n], (0..n as i64).map(|v| v % 3 + 1).collect()] {
                let r = h1_generic_bundle(&lat, &Cycle::new(z), &l, &opts()).unwrap();
                assert_eq!((r.h1, r.realizable), (0, true), "{name} {b:?}");
            }
        }
    }
}
