//! Statements about the whole resolution `X̃`, evaluated on a large cycle.
//!
//! The starting cycle always contains every point where the uncorrected
//! `χ` could win, so with the zero oracle it is exact. With a nontrivial
//! oracle the cycle is doubled until two consecutive values agree.

use num_traits::ToPrimitive;

use crate::lattice::{ChernClass, Cycle, Lattice};
use crate::opt::{laufer_saturate, level_box, min_chi_positive, SearchOptions};

use super::{
    h1_oz_relgen, h1_relative_bundle, relative_dominant, DominanceReport, OracleKind, Region, RelativeError,
    SubStructure, Terms, Twist,
};

/// Doublings tried before giving up on stabilization.
pub const MAX_DOUBLINGS: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilized<T> {
    pub value: T,
    /// The cycle the value was read off.
    pub cycle: Cycle,
    pub doublings: u32,
}

fn stabilize<T>(
    start: Cycle,
    sub: &SubStructure,
    mut f: impl FnMut(&Cycle) -> Result<T, RelativeError>,
    same: impl Fn(&T, &T) -> bool,
) -> Result<Stabilized<T>, RelativeError> {
    let mut value = f(&start)?;
    let mut cycle = start;
    if sub.oracle.kind() == OracleKind::Zero || sub.v1.is_empty() {
        return Ok(Stabilized { value, cycle, doublings: 0 });
    }
    for doublings in 1..=MAX_DOUBLINGS {
        let bigger = cycle.scale(2);
        let next = f(&bigger)?;
        let done = same(&value, &next);
        value = next;
        cycle = bigger;
        if done {
            return Ok(Stabilized { value, cycle, doublings });
        }
    }
    Err(RelativeError::NotStabilized(format!("{:?}", cycle.coeffs())))
}

/// `max(E, B)` where `[0, B]` holds every `l ≥ 0` with `χ(base + l) ≤ χ(base)`.
fn level_cover(lat: &Lattice, base: &ChernClass) -> Cycle {
    let e = lat.reduced_cycle();
    match level_box(lat, base, &lat.chi(base)) {
        Some(b) => b.join(&e),
        None => e,
    }
}

/// Dominance of `(l', O)` on a large cycle.
fn dominance_on_large(
    lat: &Lattice,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<Stabilized<DominanceReport>, RelativeError> {
    let start = level_cover(lat, &l.neg());
    stabilize(start, sub, |z| relative_dominant(lat, z, l, sub, opts), |a, b| a.dominant == b.dominant)
}

/// `p_g` of the relatively generic structure.
pub fn pg_relgen(lat: &Lattice, sub: &SubStructure, opts: &SearchOptions) -> Result<Stabilized<u64>, RelativeError> {
    let cert = min_chi_positive(lat, opts)?.certificate;
    let start = cert.join(&lat.reduced_cycle());
    stabilize(start, sub, |z| h1_oz_relgen(lat, z, sub, opts), |a, b| a == b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipReason {
    ZeroClass,
    OutsideLipmanCone,
    Dominant,
    NotDominant,
}

impl MembershipReason {
    pub fn label(&self) -> &'static str {
        match self {
            MembershipReason::ZeroClass => "zero class",
            MembershipReason::OutsideLipmanCone => "outside Lipman cone",
            MembershipReason::Dominant => "relative dominant",
            MembershipReason::NotDominant => "not relative dominant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub reason: MembershipReason,
    /// The dominance test of `(-l', O)`, when it was run.
    pub dominance: Option<Stabilized<DominanceReport>>,
}

/// Membership of `l'` in the analytic semigroup: `l' = 0`, or `l' ∈ S'`
/// and `(-l', O)` is relative dominant on a large cycle, i.e.
/// `χ(l') - h¹(Z_1, O(-l')) < χ(l' + l) - h¹(min(Z - l, Z_1), O(-l' - l))`
/// for all `l > 0`.
pub fn san_member(
    lat: &Lattice,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<Membership, RelativeError> {
    lat.check_class(l)?;
    if l.is_zero() {
        return Ok(Membership { member: true, reason: MembershipReason::ZeroClass, dominance: None });
    }
    if !lat.lipman_contains(l) {
        return Ok(Membership { member: false, reason: MembershipReason::OutsideLipmanCone, dominance: None });
    }
    let report = dominance_on_large(lat, &l.neg(), sub, opts)?;
    let member = report.value.dominant;
    let reason = if member { MembershipReason::Dominant } else { MembershipReason::NotDominant };
    Ok(Membership { member, reason, dominance: Some(report) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalH1 {
    /// `h¹(O_X̃(l'))`.
    pub h1: u64,
    /// `χ(-l') - min_{l≥0} term(l)` before the correction.
    pub direct: u64,
    /// `D` for integral `l' ≥ 0`.
    pub correction: Option<u64>,
    /// The same minimum restricted to `l ≥ s(-l') + l'`.
    pub via_saturation: u64,
    /// `s(-l') + l'`.
    pub saturation: Cycle,
    pub cycle: Cycle,
}

/// `h¹` of the natural line bundle `O_X̃(l')` on the relatively generic
/// structure, with the `D`-correction for integral `l' ≥ 0`.
pub fn h1_natural(
    lat: &Lattice,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<NaturalH1, RelativeError> {
    lat.check_class(l)?;
    let sat = laufer_saturate(lat, &l.neg());
    let start = level_cover(lat, &l.neg()).join(&sat.added);
    let both = stabilize(
        start,
        sub,
        |z| {
            let direct = h1_relative_bundle(lat, z, l, sub, opts)?.h1;
            let terms = Terms::new(lat, z, l.pairings(), sub)?;
            let (min, _, _) =
                terms.minimize(Region::Above(sat.added.coeffs()), opts)?.expect("saturation lies in the box");
            Ok((direct, u64::try_from(-min).expect("term(s + l') is at most 0")))
        },
        |a, b| a == b,
    )?;
    let (direct, via_saturation) = both.value;
    let correction = if l.is_integral() && l.is_effective() {
        let zero = dominance_on_large(lat, &lat.zero_class(), sub, opts)?;
        Some(if zero.value.dominant { 0 } else { 1 })
    } else {
        None
    };
    Ok(NaturalH1 {
        h1: direct + correction.unwrap_or(0),
        direct,
        correction,
        via_saturation,
        saturation: sat.added,
        cycle: both.cycle,
    })
}

/// Whether `h¹(O_Z) = h¹(O_{Z_1})` for every structure extending the
/// sub-structure: the dominance test of the trivial class on `Z ≥ E`.
pub fn relatively_rational(
    lat: &Lattice,
    z: &Cycle,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<DominanceReport, RelativeError> {
    lat.check_cycle(z)?;
    if z.coeffs().iter().any(|&c| c < 1) {
        return Err(RelativeError::Precondition(format!("cycle {} is not >= E", lat.display_cycle(z))));
    }
    relative_dominant(lat, z, &lat.zero_class(), sub, opts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcaDims {
    /// `(l', Z)`, the dimension of `ECa^{l'}(Z)`.
    pub eca: i64,
    /// `h¹(Z_1, O(l')) - h¹(O_{Z_1}) + (l', Z)`.
    pub eca_rel: i64,
    /// `(l', Z) + h¹(Z, L) - h¹(O_Z)`.
    pub fiber: i64,
    /// `l' ∈ -S'`.
    pub nonempty: bool,
}

pub fn eca_dims(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<EcaDims, RelativeError> {
    lat.check_class(l)?;
    lat.check_cycle(z)?;
    let eca = lat.pair_cycle(z, l);
    let z1 = sub.z1(z);
    let o1 = if z1.is_zero() { 0 } else { sub.oracle.evaluate(&z1, &Twist::of(l))? as i64 };
    let o0 = if z1.is_zero() { 0 } else { sub.oracle.evaluate(&z1, &Twist::zero(lat.len()))? as i64 };
    let h1 = h1_relative_bundle(lat, z, l, sub, opts)?.h1 as i64;
    let h1_oz = h1_oz_relgen(lat, z, sub, opts)? as i64;
    Ok(EcaDims { eca, eca_rel: o1 - o0 + eca, fiber: eca + h1 - h1_oz, nonempty: lat.lipman_contains(&l.neg()) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticRow {
    pub n: u32,
    pub dominant: bool,
    pub margin: Option<i64>,
    pub witness: Option<Cycle>,
    pub cycle: Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticReport {
    pub rows: Vec<EllipticRow>,
    /// No `N` has `(-N E*_v, O)` dominant while `(-E*_v, O)` is not.
    pub pass: bool,
}

/// Dominance of `(-N E*_v, O)` for `1 ≤ N ≤ n_max` on an elliptic or rational
/// graph, checking that dominance for some `N` forces it for `N = 1`.
pub fn elliptic_dominance_check(
    lat: &Lattice,
    v: usize,
    n_max: u32,
    sub: &SubStructure,
    opts: &SearchOptions,
) -> Result<EllipticReport, RelativeError> {
    let min = min_chi_positive(lat, opts)?.result.value.to_integer().to_i64().expect("χ fits i64");
    if min < 0 {
        return Err(RelativeError::Precondition(format!("min χ = {min} < 0: graph is neither rational nor elliptic")));
    }
    if v >= lat.len() {
        return Err(RelativeError::Precondition(format!("vertex index {v} out of range")));
    }
    if sub.v1.contains(v) {
        return Err(RelativeError::Precondition(format!("vertex {} lies in the sub-structure", lat.ids()[v])));
    }
    if n_max == 0 {
        return Err(RelativeError::Precondition("n_max must be at least 1".into()));
    }
    let estar = lat.dual_basis(v)?;
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let class = estar.scale(-(n as i64));
        let report = dominance_on_large(lat, &class, sub, opts)?;
        rows.push(EllipticRow {
            n,
            dominant: report.value.dominant,
            margin: report.value.margin,
            witness: report.value.witness,
            cycle: report.cycle,
        });
    }
    let pass = rows[0].dominant || rows.iter().all(|r| !r.dominant);
    Ok(EllipticReport { rows, pass })
}
