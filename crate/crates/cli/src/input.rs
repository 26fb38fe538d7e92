//! Graph loading and the textual coordinate formats of the command line.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use plumbing_core::corpus::{self, random_tree};
use plumbing_core::lattice::parse_rational;
use plumbing_core::relative::{SubStructure, TableOracle, TowerSpec};
use plumbing_core::{parse_graph, ChernClass, Cycle, GraphError, Lattice, LatticeError, PlumbingGraph, VertexSet};
use sha2::{Digest, Sha256};

use crate::args::{ChernArgs, SubArgs};
use crate::error::CliError;

/// The raw text of a graph and where it came from.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn load(spec: &str, seed: u64) -> Result<Source, CliError> {
        let text = if let Some(name) = spec.strip_prefix("corpus:") {
            corpus::source(name).ok_or_else(|| {
                CliError::input(format!("unknown corpus graph {name:?}; known: {}", corpus::NAMES.join(", ")))
            })?
        } else if let Some(n) = spec.strip_prefix("random:") {
            let n: usize = n
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| CliError::input(format!("random:<n> needs a positive vertex count, got {n:?}")))?;
            random_tree(seed, n).0.to_json()
        } else {
            read(Path::new(spec))?
        };
        Ok(Source { name: spec.to_string(), text })
    }

    pub fn digest(&self) -> String {
        hex(&Sha256::digest(self.text.as_bytes()))
    }

    pub fn graph(&self) -> Result<PlumbingGraph, GraphError> {
        parse_graph(&self.text)
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A validated graph with its lattice.
pub fn lattice(source: &Source) -> Result<Arc<Lattice>, CliError> {
    let graph = source.graph()?;
    Ok(Arc::new(Lattice::new(&graph)?))
}

/// Parses `id:value,id:value`; unlisted vertices get `zero`.
fn coords<T: Clone>(lat: &Lattice, text: &str, zero: T, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, CliError> {
    let mut out = vec![zero; lat.len()];
    let mut seen = VertexSet::empty(lat.len());
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (id, value) =
            item.split_once(':').ok_or_else(|| CliError::input(format!("expected id:value, got {item:?}")))?;
        let v = lat.index_of(id.trim())?;
        if seen.contains(v) {
            return Err(CliError::input(format!("vertex {id} given twice")));
        }
        seen.insert(v);
        out[v] = parse(value.trim()).ok_or_else(|| CliError::input(format!("bad coefficient {value:?} for {id}")))?;
    }
    Ok(out)
}

/// An effective cycle; `reduced` stands for `E`.
pub fn cycle(lat: &Lattice, text: &str) -> Result<Cycle, CliError> {
    if text.trim() == "reduced" {
        return Ok(lat.reduced_cycle());
    }
    let c = Cycle::new(coords(lat, text, 0i64, |s| s.parse().ok())?);
    if !c.is_effective() {
        return Err(CliError::input(format!("cycle {} is not effective", lat.display_cycle(&c))));
    }
    Ok(c)
}

pub fn chern(lat: &Lattice, args: &ChernArgs) -> Result<ChernClass, CliError> {
    match (&args.chern_estar, &args.chern_e) {
        (Some(text), None) => Ok(lat.class_from_estar(&coords(lat, text, 0i64, |s| s.parse().ok())?)?),
        (None, Some(text)) => {
            let e = coords(lat, text, BigRational::from_integer(0.into()), parse_rational)?;
            Ok(lat.class_from_e(e)?)
        }
        _ => Err(CliError::input("exactly one of --chern-estar and --chern-e is required")),
    }
}

pub fn vertex_set(lat: &Lattice, text: &str) -> Result<VertexSet, CliError> {
    let mut set = VertexSet::empty(lat.len());
    for id in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        set.insert(lat.index_of(id)?);
    }
    Ok(set)
}

/// How the fixed sub-structure was specified.
pub enum Structure {
    Generic,
    Subgraph { sub: SubStructure },
    Tower { tower: TowerSpec, layer: usize, sub: SubStructure },
}

impl Structure {
    pub fn resolve(lat: &Arc<Lattice>, args: &SubArgs) -> Result<Structure, CliError> {
        if let Some(path) = &args.tower {
            let tower = TowerSpec::parse(lat, &read(path)?).map_err(|e| CliError::file(path, e))?;
            let layer = args.layer.unwrap_or(tower.len());
            if !(1..=tower.len()).contains(&layer) {
                return Err(CliError::input(format!("--layer {layer} outside 1..={}", tower.len())));
            }
            let sub = tower.sub_structure(lat, layer);
            return Ok(Structure::Tower { tower, layer, sub });
        }
        let Some(ids) = &args.subgraph else {
            return Ok(Structure::Generic);
        };
        let v1 = vertex_set(lat, ids)?;
        let sub = match &args.oracle {
            Some(path) => {
                let table =
                    TableOracle::parse(lat.clone(), v1.clone(), &read(path)?).map_err(|e| CliError::file(path, e))?;
                SubStructure::new(v1, Arc::new(table))
            }
            None => SubStructure::generic(lat, v1),
        };
        Ok(Structure::Subgraph { sub })
    }

    pub fn sub(&self, n: usize) -> SubStructure {
        match self {
            Structure::Generic => SubStructure::empty(n),
            Structure::Subgraph { sub } | Structure::Tower { sub, .. } => sub.clone(),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::NotNegativeDefinite { .. } => CliError::new("lattice", e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}
