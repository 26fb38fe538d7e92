//! Bundled example graphs and a seeded random-tree generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{parse_graph, PlumbingGraph, Vertex};
use crate::lattice::{Lattice, LatticeError};

const BUILTIN: &[(&str, &str)] = &[
    ("a1", include_str!("../corpus/a1.json")),
    ("a2", include_str!("../corpus/a2.json")),
    ("d4", include_str!("../corpus/d4.json")),
    ("e6", include_str!("../corpus/e6.json")),
    ("e7", include_str!("../corpus/e7.json")),
    ("e8", include_str!("../corpus/e8.json")),
    ("minus3", include_str!("../corpus/minus3.json")),
    ("star237", include_str!("../corpus/star237.json")),
];

/// Length used for the parametric `an` entry when no length is given.
pub const DEFAULT_AN: usize = 5;

/// Names of the bundled graphs, `an` standing for the `A_n` chain generator.
pub const NAMES: &[&str] = &["a1", "a2", "an", "d4", "e6", "e7", "e8", "minus3", "star237"];

/// Raw JSON of a bundled graph.
pub fn source(name: &str) -> Option<String> {
    if let Some((_, text)) = BUILTIN.iter().find(|(n, _)| *n == name) {
        return Some((*text).to_string());
    }
    an_length(name).map(|n| an(n).to_json())
}

fn an_length(name: &str) -> Option<usize> {
    if name == "an" {
        return Some(DEFAULT_AN);
    }
    let n: usize = name.strip_prefix('a')?.parse().ok()?;
    (n >= 1).then_some(n)
}

/// Looks up `a1`, `a2`, `an`, `a<n>`, `d4`, `e6`, `e7`, `e8`, `minus3`, `star237`.
pub fn graph(name: &str) -> Option<PlumbingGraph> {
    source(name).map(|text| parse_graph(&text).expect("bundled graph is valid"))
}

pub fn lattice(name: &str) -> Option<Lattice> {
    graph(name).map(|g| Lattice::new(&g).expect("bundled graph is negative definite"))
}

/// All bundled graphs, in [`NAMES`] order.
pub fn all() -> Vec<(&'static str, PlumbingGraph)> {
    NAMES.iter().map(|&n| (n, graph(n).expect("listed graph exists"))).collect()
}

fn vertex(i: usize, euler: i64) -> Vertex {
    Vertex { id: format!("v{i}"), euler, genus: 0 }
}

/// The `A_n` chain of `n` vertices with Euler number -2.
pub fn an(n: usize) -> PlumbingGraph {
    assert!(n >= 1, "A_n needs at least one vertex");
    let vertices = (0..n).map(|i| vertex(i, -2)).collect();
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    PlumbingGraph::new(vertices, edges).expect("chain is a tree")
}

/// A chain with the given Euler numbers.
pub fn chain(eulers: &[i64]) -> PlumbingGraph {
    let vertices = eulers.iter().enumerate().map(|(i, &e)| vertex(i, e)).collect();
    let edges = (1..eulers.len()).map(|i| (i - 1, i)).collect();
    PlumbingGraph::new(vertices, edges).expect("chain is a tree")
}

/// A star: centre `v0` and one leaf per entry of `arms`.
pub fn star(centre: i64, arms: &[i64]) -> PlumbingGraph {
    let mut vertices = vec![vertex(0, centre)];
    vertices.extend(arms.iter().enumerate().map(|(i, &e)| vertex(i + 1, e)));
    let edges = (1..=arms.len()).map(|i| (0, i)).collect();
    PlumbingGraph::new(vertices, edges).expect("star is a tree")
}

/// A random negative definite tree on `n` vertices with Euler numbers in
/// `[-4, -1]`. Each vertex `i > 0` attaches to a uniformly chosen earlier
/// vertex; candidates that are not negative definite are redrawn from the
/// same stream, so the result depends only on `(seed, n)`.
pub fn random_tree(seed: u64, n: usize) -> (PlumbingGraph, Lattice) {
    assert!(n >= 1, "random tree needs at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let vertices = (0..n).map(|i| vertex(i, rng.gen_range(-4..=-1))).collect();
        let edges = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        let g = PlumbingGraph::new(vertices, edges).expect("parent pointers form a tree");
        match Lattice::new(&g) {
            Ok(lat) => return (g, lat),
            Err(LatticeError::NotNegativeDefinite { .. }) => continue,
            Err(e) => panic!("unexpected lattice error: {e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        assert_eq!(all().len(), 9);
        for (name, g) in all() {
            Lattice::new(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert_eq!(graph("a7").unwrap().len(), 7);
        assert!(graph("a0").is_none());
        assert!(graph("nope").is_none());
    }

    #[test]
    fn random_tree_is_reproducible() {
        let (g1, _) = random_tree(7, 6);
        let (g2, _) = random_tree(7, 6);
        assert_eq!(g1, g2);
        assert_eq!(g1.len(), 6);
        let differs = (0..20).any(|s| random_tree(s, 6).0 != g1);
        assert!(differs);
    }

    #[test]
    fn determinants_of_ade() {
        let det = |name: &str| lattice(name).unwrap().det_h().clone();
        assert_eq!(det("a2"), 3.into());
        assert_eq!(det("d4"), 4.into());
        assert_eq!(det("e6"), 3.into());
        assert_eq!(det("e7"), 2.into());
        assert_eq!(det("e8"), 1.into());
        assert_eq!(det("star237"), 1.into());
        assert_eq!(lattice("a5").unwrap().det_h(), &6.into());
    }
}
