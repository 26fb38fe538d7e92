#![allow(dead_code)]

use std::sync::Arc;

use plumbing_core::corpus::random_tree;
use plumbing_core::relative::SubStructure;
use plumbing_core::{ChernClass, Cycle, Lattice, VertexSet};
use proptest::prelude::*;

/// A random small tree with a box, a Chern class and a vertex subset.
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub lat: Arc<Lattice>,
    pub z: Cycle,
    pub estar: Vec<i64>,
    pub v1: VertexSet,
}

impl Instance {
    pub fn class(&self) -> ChernClass {
        self.lat.class_from_estar(&self.estar).unwrap()
    }

    pub fn generic_sub(&self) -> SubStructure {
        SubStructure::generic(&self.lat, self.v1.clone())
    }
}

pub fn instance(max_n: usize, max_coeff: i64, estar_range: i64) -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1..=max_n).prop_flat_map(move |(seed, n)| {
        (
            Just(seed),
            Just(n),
            prop::collection::vec(0..=max_coeff, n),
            prop::collection::vec(-estar_range..=estar_range, n),
            prop::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(seed, n, z, estar, mask)| {
                let (_, lat) = random_tree(seed, n);
                Instance { seed, lat: Arc::new(lat), z: Cycle::new(z), estar, v1: VertexSet::from_mask(mask) }
            })
    })
}
