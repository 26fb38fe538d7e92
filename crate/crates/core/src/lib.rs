//! Exact lattice invariants of plumbing graphs: the intersection lattice,
//! certified minimization of `χ`, generic and relatively generic line-bundle
//! cohomology numbers, and brute-force reference implementations.

pub mod brute;
pub mod corpus;
pub mod exec;
pub mod generic;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod opt;
pub mod relative;

pub use exec::ExecMode;
pub use graph::{parse_graph, GraphError, PlumbingGraph, Vertex, VertexSet};
pub use lattice::{ChernClass, Cycle, Lattice, LatticeError};
pub use opt::{MinChiResult, SearchOptions, Strategy};
