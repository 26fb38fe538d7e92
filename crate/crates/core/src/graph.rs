//! Plumbing graphs: parsing, validation and vertex subsets.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GRAPH_FORMAT: &str = "plumbing/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("structure error at {location}: {message}")]
    Structure { location: String, message: String },
}

impl GraphError {
    fn structure(location: impl Into<String>, message: impl Into<String>) -> Self {
        GraphError::Structure { location: location.into(), message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub euler: i64,
    #[serde(default)]
    pub genus: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    format: String,
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

/// A validated plumbing tree. Vertex order is the file order and fixes the
/// matrix ordering of everything derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph, GraphError> {
    let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.format != GRAPH_FORMAT {
        return Err(GraphError::structure(
            "format",
            format!("unsupported format {:?}, expected {GRAPH_FORMAT:?}", raw.format),
        ));
    }
    PlumbingGraph::from_named_edges(raw.vertices, raw.edges)
}

impl PlumbingGraph {
    /// Builds a graph from vertices and edges given by vertex index.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let named = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let name = |i: usize| {
                    vertices.get(i).map(|v| v.id.clone()).ok_or_else(|| {
                        GraphError::structure(format!("edges[{k}]"), format!("vertex index {i} out of range"))
                    })
                };
                Ok((name(a)?, name(b)?))
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::from_named_edges(vertices, named)
    }

    fn from_named_edges(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::structure("vertices", "graph has no vertices"));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.id.is_empty() {
                return Err(GraphError::structure(format!("vertices[{i}].id"), "empty vertex id"));
            }
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::structure(format!("vertices[{i}].id"), format!("duplicate id {:?}", v.id)));
            }
            if v.genus != 0 {
                return Err(GraphError::structure(
                    format!("vertices[{i}].genus"),
                    format!("nonzero genus {} at vertex {:?}", v.genus, v.id),
                ));
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (k, (a, b)) in edges.iter().enumerate() {
            let loc = format!("edges[{k}]");
            let ia = *index.get(a).ok_or_else(|| GraphError::structure(&loc, format!("unknown endpoint {a:?}")))?;
            let ib = *index.get(b).ok_or_else(|| GraphError::structure(&loc, format!("unknown endpoint {b:?}")))?;
            if ia == ib {
                return Err(GraphError::structure(&loc, format!("not a tree: self-loop at {a:?}")));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::structure(&loc, format!("not a tree: repeated edge {a:?}-{b:?}")));
            }
            out.push((ia, ib));
        }
        let n = vertices.len();
        if out.len() != n - 1 {
            return Err(GraphError::structure("edges", format!("not a tree: {} edges for {} vertices", out.len(), n)));
        }
        let graph = PlumbingGraph { vertices, edges: out, index };
        let reached = graph.reachable_from(0);
        if let Some(v) = (0..n).find(|&v| !reached[v]) {
            return Err(GraphError::structure(
                format!("vertices[{v}]"),
                format!("not a tree: {:?} is not connected to {:?}", graph.vertices[v].id, graph.vertices[0].id),
            ));
        }
        Ok(graph)
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Canonical JSON form (pretty printed, genus omitted).
    pub fn to_json(&self) -> String {
        let vertices: Vec<serde_json::Value> =
            self.vertices.iter().map(|v| serde_json::json!({ "id": v.id, "euler": v.euler })).collect();
        let edges: Vec<[&str; 2]> =
            self.edges.iter().map(|&(a, b)| [self.vertices[a].id.as_str(), self.vertices[b].id.as_str()]).collect();
        let doc = serde_json::json!({ "format": GRAPH_FORMAT, "vertices": vertices, "edges": edges });
        let mut s = serde_json::to_string_pretty(&doc).expect("graph serializes");
        s.push('\n');
        s
    }
}

/// A subset of vertices, indexed by file order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<bool>);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(vec![false; n])
    }

    pub fn full(n: usize) -> Self {
        VertexSet(vec![true; n])
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in indices {
            s.0[i] = true;
        }
        s
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        VertexSet(mask)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: usize) {
        self.0[v] = true;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().zip(&other.0).map(|(&a, &b)| a || b).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().zip(&other.0).map(|(&a, &b)| a && b).collect())
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet(self.0.iter().map(|&b| !b).collect())
    }

    pub fn mask(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure_message(text: &str) -> String {
        match parse_graph(text) {
            Err(GraphError::Structure { message, .. }) => message,
            other => panic!("expected structure error, got {other:?}"),
        }
    }

    #[test]
    fn single_vertex() {
        let g = parse_graph(r#"{"format":"plumbing/1","vertices":[{"id":"v0","euler":-2}],"edges":[]}"#).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(g.vertices()[0].genus, 0);
    }

    #[test]
    fn a2_graph() {
        let g = parse_graph(
            r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2,"genus":0}],"edges":[["a","b"]]}"#,
        )
        .unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.index_of("b"), Some(1));
    }

    #[test]
    fn parallel_edges_are_not_a_tree() {
        let msg = structure_message(
            r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2}],"edges":[["a","b"],["b","a"]]}"#,
        );
        assert!(msg.starts_with("not a tree"), "{msg}");
    }

    #[test]
    fn structural_failures() {
        let base =
            |verts: &str, edges: &str| format!(r#"{{"format":"plumbing/1","vertices":[{verts}],"edges":[{edges}]}}"#);
        let two = r#"{"id":"a","euler":-2},{"id":"b","euler":-2}"#;
        assert!(structure_message(&base(two, "")).contains("not a tree"));
        assert!(structure_message(&base(two, r#"["a","c"]"#)).contains("unknown endpoint"));
        assert!(structure_message(&base(two, r#"["a","a"]"#)).contains("self-loop"));
        assert!(structure_message(&base(r#"{"id":"a","euler":-2},{"id":"a","euler":-3}"#, "")).contains("duplicate id"));
        assert!(structure_message(&base(r#"{"id":"a","euler":-2,"genus":1}"#, "")).contains("nonzero genus"));
        let three = r#"{"id":"a","euler":-2},{"id":"b","euler":-2},{"id":"c","euler":-2},{"id":"d","euler":-2}"#;
        let msg = structure_message(&base(three, r#"["a","b"],["b","c"],["c","a"]"#));
        assert!(msg.contains("not connected"), "{msg}");
    }

    #[test]
    fn syntax_error_has_location() {
        match parse_graph("{\n  \"format\": \"plumbing/1\",\n  oops }") {
            Err(GraphError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_graph(r#"{"format":"plumbing/1","vertices":[{"id":"a"}],"edges":[]}"#),
            Err(GraphError::Syntax { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text =
            r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-1},{"id":"b","euler":-2}],"edges":[["a","b"]]}"#;
        let g = parse_graph(text).unwrap();
        assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_indices(4, [0, 2]);
        let b = VertexSet::from_indices(4, [2, 3]);
        assert_eq!(a.union(&b).count(), 3);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![2]);
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.complement().iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(a.to_string(), "{0,2}");
    }
}
