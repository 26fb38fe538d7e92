//! Relatively generic cohomology: the dominance test, the relative `h¹`/`h⁰`
//! formulas, recursive towers and the `X̃`-level corollaries.
//!
//! Throughout, `Δ(l) = χ(-l' + l) - χ(-l') = χ(l) + (l', l)` and for
//! `0 ≤ l ≤ Z` the relative term is
//! `term(l) = Δ(l) - h¹(min(Z - l, Z_1), O(l' - l))`, the second summand
//! coming from the sub-structure oracle.

mod corollary;
pub mod oracle;
pub mod tower;

pub use corollary::{
    eca_dims, elliptic_dominance_check, h1_natural, pg_relgen, relatively_rational, san_member, EcaDims,
    EllipticReport, EllipticRow, Membership, MembershipReason, NaturalH1, Stabilized,
};
pub use oracle::{GenericRecursiveOracle, H1Oracle, OracleError, OracleKind, TableOracle, Twist, ZeroOracle};
pub use tower::TowerSpec;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exec::scan_min;
use crate::graph::VertexSet;
use crate::lattice::{ChernClass, Cycle, Lattice, LatticeError};
use crate::opt::{min_delta, min_delta_positive, OptError, SearchOptions};

/// Malformed tower or oracle-table file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl FileError {
    pub(crate) fn syntax(e: serde_json::Error) -> Self {
        if e.is_data() {
            FileError::Invalid { location: format!("line {}", e.line()), message: e.to_string() }
        } else {
            FileError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
        }
    }

    pub(crate) fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        FileError::Invalid { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelativeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cycle {0} is not effective")]
    NotEffective(String),
    #[error("box has {points} points, above the scan limit {limit}")]
    BoxTooLarge { points: u64, limit: u64 },
    #[error("hypothesis not satisfied: {message} at {}", vertices.join(", "))]
    Hypothesis { message: String, vertices: Vec<String> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("value did not stabilize up to the box {0}")]
    NotStabilized(String),
}

/// A fixed analytic sub-structure on `v1`, seen through its oracle.
#[derive(Clone)]
pub struct SubStructure {
    pub v1: VertexSet,
    pub oracle: Arc<dyn H1Oracle>,
}

impl fmt::Debug for SubStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubStructure").field("v1", &self.v1.to_string()).field("oracle", &self.oracle).finish()
    }
}

impl SubStructure {
    pub fn new(v1: VertexSet, oracle: Arc<dyn H1Oracle>) -> Self {
        SubStructure { v1, oracle }
    }

    /// `v1 = ∅` with the zero oracle.
    pub fn empty(n: usize) -> Self {
        SubStructure { v1: VertexSet::empty(n), oracle: Arc::new(ZeroOracle) }
    }

    /// `v1` carrying the generic structure; falls back to [`Self::empty`].
    pub fn generic(lattice: &Arc<Lattice>, v1: VertexSet) -> Self {
        if v1.is_empty() {
            return Self::empty(lattice.len());
        }
        let oracle = GenericRecursiveOracle::single(lattice.clone(), v1.clone());
        SubStructure { v1, oracle: Arc::new(oracle) }
    }

    /// `Z_1 = Z|_{v1}`.
    pub fn z1(&self, z: &Cycle) -> Cycle {
        z.truncate(&self.v1)
    }

    pub fn substitution_unchecked(&self) -> bool {
        self.oracle.substitution_unchecked()
    }

    /// Every oracle query on `[0, Z]` is on the zero cycle or returns 0.
    fn is_trivial_on(&self, z: &Cycle) -> bool {
        self.oracle.kind() == OracleKind::Zero || self.z1(z).is_zero()
    }
}

/// Outcome of the relative dominance test on `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    pub dominant: bool,
    /// A violating `0 < l ≤ Z`, present iff not dominant.
    pub witness: Option<Cycle>,
    /// `min_{0<l≤Z} (RHS(l) - LHS)`; `None` when `Z = 0`.
    pub margin: Option<i64>,
    pub explored: u64,
}

impl DominanceReport {
    pub fn from_margin(margin: Option<i64>, witness: Option<Cycle>, explored: u64) -> Self {
        let dominant = margin.is_none_or(|m| m >= 1);
        DominanceReport { dominant, witness: if dominant { None } else { witness }, margin, explored }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeH1 {
    pub h1: u64,
    /// Lexicographically first minimizer of the relative term.
    pub argmin: Cycle,
    pub explored: u64,
    pub substitution_unchecked: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Region<'a> {
    All,
    Positive,
    /// `lower ≤ l ≤ Z`.
    Above(&'a [i64]),
}

pub(crate) struct Terms<'a> {
    lat: &'a Lattice,
    z: &'a Cycle,
    z1: Cycle,
    pairing: &'a [i64],
    sub: &'a SubStructure,
}

impl<'a> Terms<'a> {
    pub(crate) fn new(
        lat: &'a Lattice,
        z: &'a Cycle,
        pairing: &'a [i64],
        sub: &'a SubStructure,
    ) -> Result<Self, RelativeError> {
        lat.check_cycle(z)?;
        if !z.is_effective() {
            return Err(RelativeError::NotEffective(lat.display_cycle(z).to_string()));
        }
        if sub.v1.universe() != lat.len() {
            return Err(LatticeError::DimensionMismatch { expected: lat.len(), found: sub.v1.universe() }.into());
        }
        Ok(Terms { lat, z, z1: sub.z1(z), pairing, sub })
    }

    /// `Δ(l)`.
    fn delta(&self, l: &[i64]) -> i64 {
        self.lat.chi_cycle(&Cycle::new(l.to_vec())) + l.iter().zip(self.pairing).map(|(a, b)| a * b).sum::<i64>()
    }

    /// `h¹(min(Z - l, Z_1), O(l' - l))`.
    pub(crate) fn oracle_at(&self, l: &[i64]) -> Result<i64, OracleError> {
        let a: Vec<i64> = (0..l.len()).map(|v| (self.z.coeffs()[v] - l[v]).min(self.z1.coeffs()[v])).collect();
        if a.iter().all(|&c| c == 0) {
            return Ok(0);
        }
        let twist = Twist::from_pairings(self.pairing.to_vec()).minus_cycle(self.lat, l);
        Ok(self.sub.oracle.evaluate(&Cycle::new(a), &twist)? as i64)
    }

    pub(crate) fn term(&self, l: &[i64]) -> Result<i64, OracleError> {
        Ok(self.delta(l) - self.oracle_at(l)?)
    }

    /// `(min term, argmin, explored)` over the region, `None` if it is empty.
    pub(crate) fn minimize(
        &self,
        region: Region<'_>,
        opts: &SearchOptions,
    ) -> Result<Option<(i64, Cycle, u64)>, RelativeError> {
        let n = self.lat.len();
        let zc = self.z.coeffs();
        let lower: Vec<i64> = match region {
            Region::Above(lo) => lo.to_vec(),
            _ => vec![0; n],
        };
        if lower.iter().zip(zc).any(|(a, b)| a > b) {
            return Ok(None);
        }
        let bounds: Vec<i64> = zc.iter().zip(&lower).map(|(z, a)| z - a).collect();
        let positive = matches!(region, Region::Positive);
        if self.sub.is_trivial_on(self.z) {
            let base_at_lower: Vec<i64> = {
                let il = self.lat.form_times(&lower);
                self.pairing.iter().zip(il).map(|(p, q)| q - p).collect()
            };
            let shift = self.delta(&lower);
            let found = if positive {
                min_delta_positive(self.lat, &base_at_lower, &bounds, opts)?
            } else {
                Some(min_delta(self.lat, &base_at_lower, &bounds, opts)?)
            };
            return Ok(found.map(|f| {
                let l: Vec<i64> = f.argmin.iter().zip(&lower).map(|(a, b)| a + b).collect();
                (shift + f.delta, Cycle::new(l), f.explored)
            }));
        }
        let points = Cycle::new(bounds.clone()).box_points();
        if points > opts.scan_limit {
            return Err(RelativeError::BoxTooLarge { points, limit: opts.scan_limit });
        }
        let found = scan_min(&bounds, opts.mode, positive, |m| {
            let l: Vec<i64> = m.iter().zip(&lower).map(|(a, b)| a + b).collect();
            self.term(&l)
        })?;
        Ok(found.best.map(|(value, m)| {
            let l: Vec<i64> = m.iter().zip(&lower).map(|(a, b)| a + b).collect();
            (value, Cycle::new(l), found.explored)
        }))
    }
}

/// `h¹(Z, L) = -min_{0≤l≤Z} term(l)` for a bundle generic in the fiber over
/// the sub-structure.
pub fn h1_relative_bundle(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<RelativeH1, RelativeError> {
    lat.check_class(l)?;
    let terms = Terms::new(lat, z, l.pairings(), sub)?;
    let (min, argmin, explored) = terms.minimize(Region::All, opts)?.expect("box contains the origin");
    Ok(RelativeH1 {
        h1: u64::try_from(-min).expect("term(0) is at most 0"),
        argmin,
        explored,
        substitution_unchecked: sub.substitution_unchecked(),
    })
}

/// `max_{0≤l≤Z} {χ(Z - l, L(-l)) + h¹(min(Z - l, Z_1), O(l' - l))}`, scanned
/// directly when the box allows and taken from `χ(Z, L) + h¹` otherwise.
pub fn h0_relative_bundle(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<u64, RelativeError> {
    lat.check_class(l)?;
    let terms = Terms::new(lat, z, l.pairings(), sub)?;
    let points = z.box_points();
    if sub.is_trivial_on(z) && points > opts.scan_limit {
        let h1 = h1_relative_bundle(lat, z, l, sub, opts)?.h1 as i64;
        return Ok(u64::try_from(crate::generic::chi_sheaf(lat, z, l) + h1).expect("h⁰ is nonnegative"));
    }
    if points > opts.scan_limit {
        return Err(RelativeError::BoxTooLarge { points, limit: opts.scan_limit });
    }
    let p = l.pairings();
    let found = scan_min(z.coeffs(), opts.mode, false, |m| -> Result<i64, OracleError> {
        let rest: Vec<i64> = z.coeffs().iter().zip(m).map(|(a, b)| a - b).collect();
        let rest_c = Cycle::new(rest);
        // χ(Z - l, L(-l)) = χ(Z - l) + (l' - l, Z - l).
        let twisted: i64 = {
            let im = lat.form_times(m);
            rest_c.coeffs().iter().enumerate().map(|(v, r)| r * (p[v] - im[v])).sum()
        };
        let sheaf = lat.chi_cycle(&rest_c) + twisted;
        Ok(-(sheaf + terms.oracle_at(m)?))
    })?;
    let (neg_max, _) = found.best.expect("box contains the origin");
    Ok(u64::try_from(-neg_max).expect("l = Z contributes 0"))
}

/// Relative dominance of `(l', 𝔏)` on `Z`: for all integral `0 < l ≤ Z`,
/// `χ(-l') - h¹(Z_1, 𝔏) < χ(-l' + l) - h¹(min(Z - l, Z_1), 𝔏(-l))`.
///
/// The witness is the lexicographically first minimizer of the right side.
pub fn relative_dominant(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<DominanceReport, RelativeError> {
    lat.check_class(l)?;
    let terms = Terms::new(lat, z, l.pairings(), sub)?;
    let term0 = terms.term(&vec![0; lat.len()])?;
    Ok(match terms.minimize(Region::Positive, opts)? {
        None => DominanceReport::from_margin(None, None, 0),
        Some((min, argmin, explored)) => DominanceReport::from_margin(Some(min - term0), Some(argmin), explored),
    })
}

/// Which coefficient hypothesis to impose on `l' = -Σ a_v E_v` over
/// `W_j ∩ |Z|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    /// `a_v > 0`, needed for the `h¹` formula and the dominance criterion.
    Positive,
    /// `a_v ≠ 0`, the weaker hypothesis of the cohomology-of-natural-bundles
    /// statement.
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelgenResult {
    pub h1: u64,
    pub argmin: Cycle,
    /// Whether `H⁰(Z, L)_reg` is nonempty, i.e. the pair is relative dominant.
    pub h0reg_nonempty: bool,
    pub dominance: DominanceReport,
    pub substitution_unchecked: bool,
}

/// `h¹` of the natural bundle `O(l')` on `Z ⊆ P_j` for the structure that is
/// relatively generic layer by layer along `tower`.
pub fn relgen_natural(
    lat: &Arc<Lattice>,
    z: &Cycle,
    l: &ChernClass,
    tower: &TowerSpec,
    j: usize,
    hypothesis: Hypothesis,
    opts: &SearchOptions,
) -> Result<RelgenResult, RelativeError> {
    lat.check_class(l)?;
    lat.check_cycle(z)?;
    if !(1..=tower.len()).contains(&j) {
        return Err(RelativeError::Precondition(format!("layer {j} outside 1..={}", tower.len())));
    }
    let pj = tower.prefix(j);
    if !z.support().is_subset(&pj) {
        return Err(RelativeError::Precondition(format!(
            "cycle {} is not supported in the first {j} layers",
            lat.display_cycle(z)
        )));
    }
    let mut bad = Vec::new();
    for v in tower.layer(j).iter().filter(|&v| z.coeffs()[v] != 0) {
        let a = -&l.e_coords()[v];
        let ok = match hypothesis {
            Hypothesis::Positive => num_traits::Signed::is_positive(&a),
            Hypothesis::Nonzero => !num_traits::Zero::is_zero(&a),
        };
        if !ok {
            bad.push(lat.ids()[v].clone());
        }
    }
    if !bad.is_empty() {
        let message = match hypothesis {
            Hypothesis::Positive => "coefficient a_v <= 0",
            Hypothesis::Nonzero => "coefficient a_v = 0",
        };
        return Err(RelativeError::Hypothesis { message: message.into(), vertices: bad });
    }
    let sub = tower.sub_structure(lat, j);
    let h1 = h1_relative_bundle(lat, z, l, &sub, opts)?;
    let dominance = relative_dominant(lat, z, l, &sub, opts)?;
    Ok(RelgenResult {
        h1: h1.h1,
        argmin: h1.argmin,
        h0reg_nonempty: dominance.dominant,
        dominance,
        substitution_unchecked: sub.substitution_unchecked(),
    })
}

/// `h¹(O_Z)` for the relatively generic structure, summed over the connected
/// components `C` of `|Z|`:
/// `1 - min_{E_C ≤ l ≤ Z_C} (χ(l) - h¹(min(Z_C - l, Z_{C,1}), O(-l)))`.
pub fn h1_oz_relgen(lat: &Lattice, z: &Cycle, sub: &SubStructure, opts: &SearchOptions) -> Result<u64, RelativeError> {
    lat.check_cycle(z)?;
    if !z.is_effective() {
        return Err(RelativeError::NotEffective(lat.display_cycle(z).to_string()));
    }
    let zero = vec![0i64; lat.len()];
    let mut total = 0u64;
    for comp in lat.components(&z.support()) {
        let zc = z.truncate(&comp);
        let terms = Terms::new(lat, &zc, &zero, sub)?;
        let lower = Cycle::reduced(&comp);
        let (min, _, _) = terms.minimize(Region::Above(lower.coeffs()), opts)?.expect("E_C lies in the box");
        total += u64::try_from(1 - min).expect("χ(E_C) = 1 bounds the minimum");
    }
    Ok(total)
}
