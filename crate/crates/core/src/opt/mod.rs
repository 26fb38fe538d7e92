//! Certified minimization of `χ` over lattice boxes and over `l > 0`,
//! Laufer sequences and the topological classification.
//!
//! All searches work on the integer objective `Δ(l) = χ(base + l) - χ(base)`,
//! which only depends on the pairings `(base, E_v)`:
//! `2Δ(l) = lᵀ(-I)l + Σ_v l_v (e_v + 2 - 2 (base, E_v))`.

mod laufer;
mod quad;

pub use laufer::{laufer_saturate, laufer_zmin, ComputationSequence, LauferStep, Saturation};
pub use quad::{QuadMin, QuadProblem};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exec::ExecMode;
use crate::lattice::{rational, ChernClass, Cycle, Lattice, LatticeError};

/// Boxes with at most this many points are scanned exhaustively under
/// [`Strategy::Auto`].
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Default cap on boxes scanned point by point with a nontrivial oracle.
pub const SCAN_LIMIT: u64 = 20_000_000;

const MAGNITUDE_LIMIT: i128 = 1 << 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("box bound must be effective, found {0} at vertex {1}")]
    NegativeBound(i64, String),
    #[error("box too large for exact 128-bit evaluation")]
    Magnitude,
    #[error("no cycle l > 0 exists on the empty lattice")]
    EmptyLattice,
    #[error("computation sequence needs a connected graph")]
    Disconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Exhaustive up to `exhaustive_limit` points, branch-and-bound above.
    #[default]
    Auto,
    Exhaustive,
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: ExecMode,
    pub strategy: Strategy,
    pub exhaustive_limit: u64,
    /// Largest box scanned point by point in the relative formulas.
    pub scan_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: ExecMode::default(),
            strategy: Strategy::Auto,
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            scan_limit: SCAN_LIMIT,
        }
    }
}

impl SearchOptions {
    pub fn sequential() -> Self {
        SearchOptions { mode: ExecMode::Sequential, ..Self::default() }
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Minimum of `Δ` with its lexicographically first minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMin {
    pub delta: i64,
    pub argmin: Vec<i64>,
    pub explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinChiResult {
    pub value: BigRational,
    pub argmin: Cycle,
    pub explored: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveMin {
    pub result: MinChiResult,
    /// Every `l ≥ 0` outside `[0, certificate]` has `χ(l) > value`.
    pub certificate: Cycle,
}

fn check_bounds(lat: &Lattice, bounds: &[i64]) -> Result<(), OptError> {
    if bounds.len() != lat.len() {
        return Err(LatticeError::DimensionMismatch { expected: lat.len(), found: bounds.len() }.into());
    }
    if let Some(v) = bounds.iter().position(|&b| b < 0) {
        return Err(OptError::NegativeBound(bounds[v], lat.ids()[v].clone()));
    }
    Ok(())
}

/// `min_{0 ≤ l ≤ bounds} Δ(l)` for the base with pairings `base_pairing`.
pub fn min_delta(
    lat: &Lattice,
    base_pairing: &[i64],
    bounds: &[i64],
    opts: &SearchOptions,
) -> Result<DeltaMin, OptError> {
    check_bounds(lat, bounds)?;
    let active: Vec<usize> = (0..lat.len()).filter(|&v| bounds[v] > 0).collect();
    let form = lat.form();
    let a = active.iter().map(|&i| active.iter().map(|&j| -form[i][j]).collect()).collect();
    let c = active.iter().map(|&v| lat.euler()[v] + 2 - 2 * base_pairing[v]).collect();
    let upper = active.iter().map(|&v| bounds[v]).collect();
    let problem = QuadProblem::new(a, c, upper);
    if problem.magnitude_bound() >= MAGNITUDE_LIMIT {
        return Err(OptError::Magnitude);
    }
    let exhaustive = match opts.strategy {
        Strategy::Exhaustive => true,
        Strategy::BranchAndBound => false,
        Strategy::Auto => problem.points() <= opts.exhaustive_limit,
    };
    let found = if exhaustive { problem.exhaustive(opts.mode) } else { problem.branch_and_bound(opts.mode) };
    debug_assert_eq!(found.value % 2, 0);
    let mut argmin = vec![0i64; lat.len()];
    for (k, &v) in active.iter().enumerate() {
        argmin[v] = found.argmin[k];
    }
    let delta = i64::try_from(found.value / 2).map_err(|_| OptError::Magnitude)?;
    Ok(DeltaMin { delta, argmin, explored: found.explored })
}

/// `min_{0 < l ≤ bounds} Δ(l)`, or `None` when the box is `{0}`.
///
/// The region `l > 0` is split by the first nonzero coordinate into disjoint
/// boxes, each shifted by the corresponding `E_k`.
pub fn min_delta_positive(
    lat: &Lattice,
    base_pairing: &[i64],
    bounds: &[i64],
    opts: &SearchOptions,
) -> Result<Option<DeltaMin>, OptError> {
    check_bounds(lat, bounds)?;
    let n = lat.len();
    let form = lat.form();
    let mut best: Option<DeltaMin> = None;
    let mut explored = 0;
    for k in 0..n {
        if bounds[k] == 0 {
            continue;
        }
        let pairing: Vec<i64> = (0..n).map(|w| base_pairing[w] + form[w][k]).collect();
        let sub_bounds: Vec<i64> = (0..n)
            .map(|w| {
                if w < k {
                    0
                } else if w == k {
                    bounds[k] - 1
                } else {
                    bounds[w]
                }
            })
            .collect();
        let sub = min_delta(lat, &pairing, &sub_bounds, opts)?;
        explored += sub.explored;
        let mut argmin = sub.argmin;
        argmin[k] += 1;
        let delta = sub.delta + 1 - base_pairing[k];
        let better = best.as_ref().is_none_or(|b| (delta, &argmin) < (b.delta, &b.argmin));
        if better {
            best = Some(DeltaMin { delta, argmin, explored: 0 });
        }
    }
    Ok(best.map(|mut b| {
        b.explored = explored;
        b
    }))
}

/// Exact minimum of `χ(base + l)` over integral `0 ≤ l ≤ bounds`.
pub fn min_chi_box(
    lat: &Lattice,
    base: &ChernClass,
    bounds: &Cycle,
    opts: &SearchOptions,
) -> Result<MinChiResult, OptError> {
    lat.check_class(base)?;
    let found = min_delta(lat, base.pairings(), bounds.coeffs(), opts)?;
    Ok(MinChiResult {
        value: lat.chi(base) + rational(found.delta),
        argmin: Cycle::new(found.argmin),
        explored: found.explored,
    })
}

/// Box `[0, B]` containing every `l ≥ 0` with `χ(base + l) ≤ c`, or `None`
/// when no real point reaches level `c`.
///
/// With `z = Z_K` and `A = -I`, `χ(x) ≤ c` is the ellipsoid
/// `(x - z/2)ᵀA(x - z/2) ≤ 2c + zᵀAz/4`, whose extent along `x_v` is
/// `sqrt(R · (A⁻¹)_vv)`.
pub fn level_box(lat: &Lattice, base: &ChernClass, c: &BigRational) -> Option<Cycle> {
    let two = rational(2);
    let zk = lat.zk();
    let mut zaz = BigRational::zero();
    for (v, z) in zk.iter().enumerate() {
        zaz -= z * rational(lat.euler()[v] + 2);
    }
    let radius = c * &two + zaz / rational(4);
    if radius.is_negative() {
        return None;
    }
    let coeffs = (0..lat.len())
        .map(|v| {
            let centre = &zk[v] / &two - &base.e_coords()[v];
            let extent = &radius * -&lat.inverse()[v][v];
            let b = floor_plus_sqrt(&centre, &extent);
            b.max(BigInt::zero()).to_i64().expect("level box fits i64")
        })
        .collect();
    Some(Cycle::new(coeffs))
}

/// `floor(t + sqrt(q))` for rational `t` and `q ≥ 0`, exactly.
fn floor_plus_sqrt(t: &BigRational, q: &BigRational) -> BigInt {
    let fits = |n: &BigInt| {
        let d = BigRational::from_integer(n.clone()) - t;
        !d.is_positive() || &d * &d <= *q
    };
    let root = (q.numer() * q.denom()).sqrt() / q.denom();
    let mut n = t.floor().to_integer() + root;
    while fits(&(&n + 1)) {
        n += 1;
    }
    while !fits(&n) {
        n -= 1;
    }
    n
}

/// `min_{l > 0} χ(l)` over all integral effective `l`, with a certificate box.
pub fn min_chi_positive(lat: &Lattice, opts: &SearchOptions) -> Result<PositiveMin, OptError> {
    if lat.is_empty() {
        return Err(OptError::EmptyLattice);
    }
    let zero = lat.zero_class();
    let search = level_box(lat, &zero, &rational(1)).expect("χ(E_v) = 1 lies on level 1");
    let found =
        min_delta_positive(lat, zero.pairings(), search.coeffs(), opts)?.expect("level-1 box contains every E_v");
    let value = rational(found.delta);
    let certificate = level_box(lat, &zero, &value).expect("the minimizer lies on its own level");
    Ok(PositiveMin {
        result: MinChiResult { value, argmin: Cycle::new(found.argmin), explored: found.explored },
        certificate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Rational,
    Elliptic,
    /// `min_{l>0} χ(l)`, always negative here.
    MinChi(i64),
}

impl Classification {
    pub fn from_min(min: i64) -> Self {
        match min {
            1.. => Classification::Rational,
            0 => Classification::Elliptic,
            v => Classification::MinChi(v),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Classification::Rational => "rational".into(),
            Classification::Elliptic => "elliptic".into(),
            Classification::MinChi(v) => format!("minchi:{v}"),
        }
    }
}

pub fn classify(lat: &Lattice, opts: &SearchOptions) -> Result<Classification, OptError> {
    let min = min_chi_positive(lat, opts)?;
    Ok(Classification::from_min(min.result.value.to_integer().to_i64().expect("χ fits i64")))
}

/// `Z_K ∈ L`.
pub fn numerically_gorenstein(lat: &Lattice) -> bool {
    lat.zk().iter().all(BigRational::is_integer)
}
