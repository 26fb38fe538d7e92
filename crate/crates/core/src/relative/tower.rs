use std::sync::Arc;

use serde::Deserialize;

use crate::graph::VertexSet;
use crate::lattice::Lattice;

use super::oracle::GenericRecursiveOracle;
use super::{FileError, SubStructure};

pub const TOWER_FORMAT: &str = "tower/1";

/// Ordered partition `V = W_1 ∪ … ∪ W_k`; layer `j` is relatively generic
/// over the union of the layers before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    layers: Vec<VertexSet>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerFile {
    format: String,
    layers: Vec<Vec<String>>,
}

impl TowerSpec {
    /// Layers must be nonempty, pairwise disjoint and cover every vertex.
    pub fn new(layers: Vec<VertexSet>, n: usize) -> Result<Self, String> {
        if layers.is_empty() {
            return Err("a tower needs at least one layer".into());
        }
        let mut seen = VertexSet::empty(n);
        for (j, layer) in layers.iter().enumerate() {
            if layer.universe() != n {
                return Err(format!("layer {} has {} slots, expected {n}", j + 1, layer.universe()));
            }
            if layer.is_empty() {
                return Err(format!("layer {} is empty", j + 1));
            }
            if let Some(v) = layer.iter().find(|&v| seen.contains(v)) {
                return Err(format!("vertex index {v} appears in more than one layer"));
            }
            seen = seen.union(layer);
        }
        if let Some(v) = seen.complement().iter().next() {
            return Err(format!("vertex index {v} is in no layer"));
        }
        Ok(TowerSpec { layers })
    }

    /// The whole graph as one generic layer.
    pub fn single(n: usize) -> Self {
        TowerSpec { layers: vec![VertexSet::full(n)] }
    }

    /// One layer per vertex, in file order.
    pub fn singletons(n: usize) -> Self {
        TowerSpec { layers: (0..n).map(|v| VertexSet::from_indices(n, [v])).collect() }
    }

    pub fn parse(lat: &Lattice, text: &str) -> Result<Self, FileError> {
        let file: TowerFile = serde_json::from_str(text).map_err(FileError::syntax)?;
        if file.format != TOWER_FORMAT {
            return Err(FileError::invalid(
                "format",
                format!("unsupported format {:?}, expected {TOWER_FORMAT:?}", file.format),
            ));
        }
        let mut layers = Vec::with_capacity(file.layers.len());
        for (j, ids) in file.layers.iter().enumerate() {
            let mut set = VertexSet::empty(lat.len());
            for id in ids {
                let v = lat.index_of(id).map_err(|e| FileError::invalid(format!("layers[{j}]"), e.to_string()))?;
                if set.contains(v) {
                    return Err(FileError::invalid(format!("layers[{j}]"), format!("vertex {id} listed twice")));
                }
                set.insert(v);
            }
            layers.push(set);
        }
        TowerSpec::new(layers, lat.len()).map_err(|m| FileError::invalid("layers", m))
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &[VertexSet] {
        &self.layers
    }

    /// `W_j` for `1 ≤ j ≤ k`.
    pub fn layer(&self, j: usize) -> &VertexSet {
        &self.layers[j - 1]
    }

    /// `P_j = W_1 ∪ … ∪ W_j`; `P_0 = ∅`.
    pub fn prefix(&self, j: usize) -> VertexSet {
        let n = self.layers[0].universe();
        self.layers[..j].iter().fold(VertexSet::empty(n), |acc, w| acc.union(w))
    }

    /// The sub-structure `(P_{j-1}, recursive oracle)` seen by layer `j`.
    pub fn sub_structure(&self, lattice: &Arc<Lattice>, j: usize) -> SubStructure {
        assert!((1..=self.len()).contains(&j), "layer index out of range");
        if j == 1 {
            return SubStructure::empty(lattice.len());
        }
        let levels: Vec<VertexSet> = (1..j).map(|i| self.prefix(i)).collect();
        let v1 = levels[levels.len() - 1].clone();
        SubStructure::new(v1, Arc::new(GenericRecursiveOracle::new(lattice.clone(), levels)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::relative::oracle::OracleKind;

    #[test]
    fn parse_and_prefixes() {
        let lat = corpus::lattice("d4").unwrap();
        let t = TowerSpec::parse(&lat, r#"{"format":"tower/1","layers":[["v1","v0"],["v3"],["v2"]]}"#).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.prefix(0), VertexSet::empty(4));
        assert_eq!(t.prefix(2), VertexSet::from_indices(4, [0, 1, 3]));
        assert_eq!(t.layer(3), &VertexSet::from_indices(4, [2]));
        let lat = Arc::new(lat);
        assert_eq!(t.sub_structure(&lat, 1).oracle.kind(), OracleKind::Zero);
        let sub = t.sub_structure(&lat, 3);
        assert_eq!(sub.v1, VertexSet::from_indices(4, [0, 1, 3]));
        assert_eq!(sub.oracle.kind(), OracleKind::GenericRecursive);
    }

    #[test]
    fn rejects_bad_partitions() {
        let lat = corpus::lattice("a2").unwrap();
        for text in [
            r#"{"format":"tower/1","layers":[["v0"]]}"#,
            r#"{"format":"tower/1","layers":[["v0","v1"],["v1"]]}"#,
            r#"{"format":"tower/1","layers":[["v0","v0"],["v1"]]}"#,
            r#"{"format":"tower/1","layers":[["v0"],[],["v1"]]}"#,
            r#"{"format":"tower/1","layers":[["v0"],["v7"]]}"#,
            r#"{"format":"tower/1","layers":[]}"#,
            r#"{"format":"tower/2","layers":[["v0","v1"]]}"#,
        ] {
            assert!(matches!(TowerSpec::parse(&lat, text), Err(FileError::Invalid { .. })), "{text}");
        }
        assert!(matches!(TowerSpec::parse(&lat, "{\"format\":"), Err(FileError::Syntax { .. })));
    }
}
