//! Evaluators of `h¹(A, O(t)|_A)` for a fixed sub-structure.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use serde::Deserialize;
use thiserror::Error;

use crate::exec::{scan_min, ExecMode};
use crate::graph::VertexSet;
use crate::lattice::{ChernClass, Cycle, Lattice};
use crate::opt::{min_delta, OptError, SearchOptions};

use super::FileError;

pub const TABLE_FORMAT: &str = "h1table/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle table has no entry for cycle {cycle} with twist E*-coordinates {twist}")]
    Missing { cycle: String, twist: String },
    #[error("cycle {cycle} is not supported on the sub-structure vertices")]
    OutsideSupport { cycle: String },
    #[error(transparent)]
    Opt(#[from] OptError),
}

/// A Chern class of the ambient lattice, carried by its pairings `(t, E_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Twist(Vec<i64>);

impl Twist {
    pub fn of(c: &ChernClass) -> Self {
        Twist(c.pairings().to_vec())
    }

    pub fn from_pairings(p: Vec<i64>) -> Self {
        Twist(p)
    }

    pub fn zero(n: usize) -> Self {
        Twist(vec![0; n])
    }

    pub fn pairings(&self) -> &[i64] {
        &self.0
    }

    pub fn estar(&self) -> Vec<i64> {
        self.0.iter().map(|p| -p).collect()
    }

    /// `t - l` for an integral cycle `l`.
    pub fn minus_cycle(&self, lat: &Lattice, l: &[i64]) -> Twist {
        let il = lat.form_times(l);
        Twist(self.0.iter().zip(il).map(|(p, q)| p - q).collect())
    }

    pub fn neg(&self) -> Twist {
        Twist(self.0.iter().map(|p| -p).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    GenericRecursive,
    Table,
    Zero,
}

impl OracleKind {
    pub fn label(&self) -> &'static str {
        match self {
            OracleKind::GenericRecursive => "generic-recursive",
            OracleKind::Table => "table",
            OracleKind::Zero => "zero",
        }
    }
}

pub trait H1Oracle: Send + Sync + fmt::Debug {
    fn kind(&self) -> OracleKind;

    /// `h¹(A, O(twist)|_A)`; `A` is supported on the sub-structure and the
    /// twist lives in the ambient lattice.
    fn evaluate(&self, a: &Cycle, twist: &Twist) -> Result<u64, OracleError>;

    /// Whether values are generic-bundle substitutes for restricted natural
    /// bundles, applied without checking when that is licensed.
    fn substitution_unchecked(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroOracle;

impl H1Oracle for ZeroOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::Zero
    }

    fn evaluate(&self, _a: &Cycle, _twist: &Twist) -> Result<u64, OracleError> {
        Ok(0)
    }
}

type MemoKey = (Vec<i64>, Vec<i64>);

/// Values every query by the relatively generic formula over a chain of
/// nested vertex sets `P_1 ⊂ … ⊂ P_m`: `H_0 = 0` and
/// `H_k(A, t) = -min_{0≤l≤A} {χ(l) + (t, l) - H_{k-1}(min(A - l, A|P_{k-1}), t - l)}`.
///
/// With a single level this is the generic `h¹` of the class `R_1(t)` in the
/// sublattice, computed in the ambient lattice since `χ` and the pairing
/// agree on cycles supported in `P_1`.
pub struct GenericRecursiveOracle {
    lattice: Arc<Lattice>,
    levels: Vec<VertexSet>,
    memo: Vec<DashMap<MemoKey, u64>>,
    opts: SearchOptions,
}

impl fmt::Debug for GenericRecursiveOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self.levels.iter().map(ToString::to_string).collect();
        f.debug_struct("GenericRecursiveOracle").field("levels", &levels).finish()
    }
}

impl GenericRecursiveOracle {
    /// `levels` must be nested and nonempty.
    pub fn new(lattice: Arc<Lattice>, levels: Vec<VertexSet>) -> Self {
        assert!(!levels.is_empty(), "at least one level");
        assert!(levels.windows(2).all(|w| w[0].is_subset(&w[1])), "levels must be nested");
        let memo = levels.iter().map(|_| DashMap::new()).collect();
        GenericRecursiveOracle { lattice, levels, memo, opts: SearchOptions::sequential() }
    }

    pub fn single(lattice: Arc<Lattice>, v1: VertexSet) -> Self {
        Self::new(lattice, vec![v1])
    }

    pub fn levels(&self) -> &[VertexSet] {
        &self.levels
    }

    pub fn memo_len(&self) -> usize {
        self.memo.iter().map(DashMap::len).sum()
    }

    fn level(&self, k: usize, a: &[i64], t: &[i64]) -> Result<u64, OracleError> {
        if a.iter().all(|&c| c == 0) {
            return Ok(0);
        }
        let set = &self.levels[k];
        if a.iter().enumerate().any(|(v, &c)| c != 0 && !set.contains(v)) {
            return Err(OracleError::OutsideSupport {
                cycle: self.lattice.display_cycle(&Cycle::new(a.to_vec())).to_string(),
            });
        }
        let key: MemoKey = (a.to_vec(), a.iter().zip(t).map(|(&c, &p)| if c != 0 { p } else { 0 }).collect());
        if let Some(hit) = self.memo[k].get(&key) {
            return Ok(*hit);
        }
        let lat = &*self.lattice;
        let value = if k == 0 {
            let base: Vec<i64> = t.iter().map(|p| -p).collect();
            let found = min_delta(lat, &base, a, &self.opts)?;
            u64::try_from(-found.delta).expect("origin bounds the minimum")
        } else {
            let lower = &self.levels[k - 1];
            let found = scan_min(a, ExecMode::Sequential, false, |l| -> Result<i64, OracleError> {
                let lc = Cycle::new(l.to_vec());
                let delta = lat.chi_cycle(&lc) + l.iter().zip(t).map(|(x, p)| x * p).sum::<i64>();
                let rest: Vec<i64> = (0..a.len()).map(|v| if lower.contains(v) { a[v] - l[v] } else { 0 }).collect();
                let il = lat.form_times(l);
                let shifted: Vec<i64> = t.iter().zip(il).map(|(p, q)| p - q).collect();
                let inner = self.level(k - 1, &rest, &shifted)?;
                Ok(delta - inner as i64)
            })?;
            let (min, _) = found.best.expect("box contains the origin");
            u64::try_from(-min).expect("origin bounds the minimum")
        };
        self.memo[k].entry(key).or_insert(value);
        Ok(value)
    }
}

impl H1Oracle for GenericRecursiveOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::GenericRecursive
    }

    fn evaluate(&self, a: &Cycle, twist: &Twist) -> Result<u64, OracleError> {
        self.level(self.levels.len() - 1, a.coeffs(), twist.pairings())
    }

    fn substitution_unchecked(&self) -> bool {
        true
    }
}

/// Values read from a user table keyed by `(A, E*-coordinates of t)`.
#[derive(Clone, Debug)]
pub struct TableOracle {
    lattice: Arc<Lattice>,
    v1: VertexSet,
    entries: HashMap<MemoKey, u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    format: String,
    entries: Vec<TableEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    cycle: BTreeMap<String, i64>,
    twist_estar: BTreeMap<String, i64>,
    h1: u64,
}

impl TableOracle {
    pub fn new(lattice: Arc<Lattice>, v1: VertexSet) -> Self {
        TableOracle { lattice, v1, entries: HashMap::new() }
    }

    /// Adds an entry; conflicting duplicates are rejected.
    pub fn insert(&mut self, a: &Cycle, twist_estar: Vec<i64>, h1: u64) -> Result<(), String> {
        let n = self.lattice.len();
        if a.len() != n || twist_estar.len() != n {
            return Err(format!("expected {n} coordinates"));
        }
        if !a.is_effective() {
            return Err("cycle must be effective".into());
        }
        if !a.support().is_subset(&self.v1) {
            return Err(format!("cycle {} is not supported on the sub-structure", self.lattice.display_cycle(a)));
        }
        match self.entries.insert((a.coeffs().to_vec(), twist_estar), h1) {
            Some(prev) if prev != h1 => Err(format!("conflicting values {prev} and {h1}")),
            _ => Ok(()),
        }
    }

    pub fn parse(lattice: Arc<Lattice>, v1: VertexSet, text: &str) -> Result<Self, FileError> {
        let file: TableFile = serde_json::from_str(text).map_err(FileError::syntax)?;
        if file.format != TABLE_FORMAT {
            return Err(FileError::invalid(
                "format",
                format!("unsupported format {:?}, expected {TABLE_FORMAT:?}", file.format),
            ));
        }
        let mut table = TableOracle::new(lattice.clone(), v1);
        for (k, entry) in file.entries.iter().enumerate() {
            let coords = |map: &BTreeMap<String, i64>, field: &str| -> Result<Vec<i64>, FileError> {
                let mut out = vec![0i64; lattice.len()];
                for (id, &c) in map {
                    let v = lattice
                        .index_of(id)
                        .map_err(|e| FileError::invalid(format!("entries[{k}].{field}"), e.to_string()))?;
                    out[v] = c;
                }
                Ok(out)
            };
            let a = Cycle::new(coords(&entry.cycle, "cycle")?);
            let t = coords(&entry.twist_estar, "twist_estar")?;
            table.insert(&a, t, entry.h1).map_err(|m| FileError::invalid(format!("entries[{k}]"), m))?;
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl H1Oracle for TableOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::Table
    }

    fn evaluate(&self, a: &Cycle, twist: &Twist) -> Result<u64, OracleError> {
        if a.is_zero() {
            return Ok(0);
        }
        if !a.support().is_subset(&self.v1) {
            return Err(OracleError::OutsideSupport { cycle: self.lattice.display_cycle(a).to_string() });
        }
        let estar = twist.estar();
        self.entries.get(&(a.coeffs().to_vec(), estar.clone())).copied().ok_or_else(|| OracleError::Missing {
            cycle: self.lattice.display_cycle(a).to_string(),
            twist: self.lattice.display_cycle(&Cycle::new(estar)).to_string(),
        })
    }
}
