mod common;

use num_traits::{Signed, Zero};
use plumbing_core::brute::brute_lipman_cycles;
use plumbing_core::corpus::{self, random_tree};
use plumbing_core::lattice::rational;
use plumbing_core::opt::{laufer_saturate, laufer_zmin};
use plumbing_core::{Cycle, Lattice};
use proptest::prelude::*;

fn check_dual_and_adjunction(lat: &Lattice) {
    let n = lat.len();
    let zk = lat.zk_class();
    for v in 0..n {
        let ev = lat.class_of_cycle(&Cycle::unit(n, v));
        let dual = lat.dual_basis(v).unwrap();
        assert!(dual.e_coords().iter().all(Signed::is_positive), "E*_{v} has a nonpositive coordinate");
        for w in 0..n {
            let ew = lat.class_of_cycle(&Cycle::unit(n, w));
            let expect = if v == w { rational(-1) } else { rational(0) };
            assert_eq!(lat.pairing(&dual, &ew).unwrap(), expect);
        }
        let adj = lat.pairing(&ev.sub(&zk), &ev).unwrap() + rational(2);
        assert!(adj.is_zero(), "adjunction fails at {v}");
    }
}

#[test]
fn corpus_duals_and_adjunction() {
    for (name, g) in corpus::all() {
        let lat = Lattice::new(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_dual_and_adjunction(&lat);
    }
}

proptest! {
    #[test]
    fn random_duals_and_adjunction(seed in any::<u64>(), n in 1usize..=7) {
        let (_, lat) = random_tree(seed, n);
        check_dual_and_adjunction(&lat);
    }

    #[test]
    fn chi_is_quadratic(seed in any::<u64>(), n in 1usize..=6,
                        a in prop::collection::vec(-3i64..=3, 6), b in prop::collection::vec(-3i64..=3, 6)) {
        let (_, lat) = random_tree(seed, n);
        let x = lat.class_from_estar(&a[..n]).unwrap();
        let y = lat.class_from_estar(&b[..n]).unwrap();
        let lhs = lat.chi(&x.add(&y));
        let rhs = lat.chi(&x) + lat.chi(&y) - lat.pairing(&x, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn class_rep_is_a_projection(seed in any::<u64>(), n in 1usize..=6, a in prop::collection::vec(-5i64..=5, 6)) {
        let (_, lat) = random_tree(seed, n);
        let x = lat.class_from_estar(&a[..n]).unwrap();
        let r = lat.class_rep(&x);
        prop_assert_eq!(lat.class_rep(&r), r.clone());
        prop_assert!(r.sub(&x).is_integral());
        prop_assert!(r.e_coords().iter().all(|q| !q.is_negative() && *q < rational(1)));
    }

    #[test]
    fn zmin_is_the_least_cone_cycle(seed in any::<u64>(), n in 1usize..=5) {
        let (_, lat) = random_tree(seed, n);
        let zmin = laufer_zmin(&lat).unwrap().terminal;
        prop_assert!(lat.lipman_contains(&lat.class_of_cycle(&zmin)));
        prop_assert!(lat.reduced_cycle().le(&zmin));
        for c in brute_lipman_cycles(&lat, &zmin).unwrap() {
            if lat.reduced_cycle().le(&c) {
                prop_assert_eq!(&c, &zmin);
            }
        }
    }

    #[test]
    fn saturation_is_idempotent_and_least(seed in any::<u64>(), n in 1usize..=4, a in prop::collection::vec(-3i64..=3, 4)) {
        let (_, lat) = random_tree(seed, n);
        let start = lat.class_from_estar(&a[..n]).unwrap();
        let s = laufer_saturate(&lat, &start);
        prop_assert!(s.terminal.sub(&start).is_integral());
        prop_assert!(lat.lipman_contains(&s.terminal));
        prop_assert!(laufer_saturate(&lat, &s.terminal).added.is_zero());
        // No competitor start + m with 0 ≤ m ≤ added, m ≠ added lies in the cone.
        for m in plumbing_core::brute::BoxIterator::new(s.added.coeffs()).unwrap() {
            let m = Cycle::new(m);
            if m != s.added {
                let competitor = start.add(&lat.class_of_cycle(&m));
                prop_assert!(!lat.lipman_contains(&competitor), "{:?} beats {:?}", m, s.added);
            }
        }
    }
}
