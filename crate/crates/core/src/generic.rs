//! Cohomology numbers of generic analytic structures and generic line
//! bundles, all reduced to box minima of `χ`.

use num_traits::ToPrimitive;

use crate::graph::VertexSet;
use crate::lattice::{ChernClass, Cycle, Lattice};
use crate::opt::{min_chi_positive, min_delta, OptError, SearchOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericH1 {
    pub h1: u64,
    /// `l' ∈ -S'`, i.e. the class carries effective Cartier divisors.
    pub realizable: bool,
    pub argmin: Cycle,
}

fn check_effective(lat: &Lattice, z: &Cycle) -> Result<(), OptError> {
    lat.check_cycle(z)?;
    if let Some(v) = z.coeffs().iter().position(|&c| c < 0) {
        return Err(OptError::NegativeBound(z.coeffs()[v], lat.ids()[v].clone()));
    }
    Ok(())
}

/// `h¹(O_Z)`: `1 - min_{E_C ≤ l ≤ Z_C} χ(l)` summed over the connected
/// components `C` of `|Z|`.
pub fn h1_generic_cycle(lat: &Lattice, z: &Cycle, opts: &SearchOptions) -> Result<u64, OptError> {
    check_effective(lat, z)?;
    let mut total = 0u64;
    for comp in lat.components(&z.support()) {
        let e = Cycle::reduced(&comp);
        let bounds = z.truncate(&comp).sub(&e);
        // Δ relative to E_C, and χ(E_C) = 1 on a connected support.
        let found = min_delta(lat, &lat.form_times(e.coeffs()), bounds.coeffs(), opts)?;
        total += u64::try_from(-found.delta).expect("l = E_C bounds the minimum");
    }
    Ok(total)
}

/// `p_g = 1 - min_{l > 0} χ(l)`.
pub fn pg_generic(lat: &Lattice, opts: &SearchOptions) -> Result<u64, OptError> {
    let min = min_chi_positive(lat, opts)?.result.value.to_integer().to_i64().expect("χ fits i64");
    Ok(u64::try_from(1 - min).expect("χ(E_v) = 1 bounds the minimum"))
}

/// `χ(-l') - min_{0≤l≤Z} χ(-l' + l)`.
pub fn h1_generic_bundle(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    opts: &SearchOptions,
) -> Result<GenericH1, OptError> {
    check_effective(lat, z)?;
    lat.check_class(l)?;
    let base: Vec<i64> = l.pairings().iter().map(|p| -p).collect();
    let found = min_delta(lat, &base, z.coeffs(), opts)?;
    Ok(GenericH1 {
        h1: u64::try_from(-found.delta).expect("l = 0 bounds the minimum"),
        realizable: lat.lipman_contains(&l.neg()),
        argmin: Cycle::new(found.argmin),
    })
}

/// `χ(-l' + Z) - χ(-l') = χ(Z) + (l', Z)`.
pub fn chi_sheaf(lat: &Lattice, z: &Cycle, l: &ChernClass) -> i64 {
    lat.chi_cycle(z) + lat.pair_cycle(z, l)
}

/// `χ(Z, L) + h¹(Z, L)` for a generic bundle.
pub fn h0_generic_bundle(lat: &Lattice, z: &Cycle, l: &ChernClass, opts: &SearchOptions) -> Result<u64, OptError> {
    let h1 = h1_generic_bundle(lat, z, l, opts)?.h1 as i64;
    let h0 = chi_sheaf(lat, z, l) + h1;
    assert!(h0 >= 0, "h0 = {h0} < 0");
    Ok(h0 as u64)
}

/// `I(l')`, the vertices with a nonzero `E*`-coordinate.
pub fn estar_support(lat: &Lattice, l: &ChernClass) -> VertexSet {
    lat.estar_support(l)
}

/// `e_Z(I) = h¹(O_Z) - h¹(O_{Z|V∖I})`.
pub fn e_z(lat: &Lattice, z: &Cycle, i: &VertexSet, opts: &SearchOptions) -> Result<u64, OptError> {
    let whole = h1_generic_cycle(lat, z, opts)?;
    let rest = h1_generic_cycle(lat, &z.truncate(&i.complement()), opts)?;
    Ok(whole.checked_sub(rest).expect("h¹ is monotone under truncation"))
}
