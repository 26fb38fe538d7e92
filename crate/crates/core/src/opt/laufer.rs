use crate::lattice::{ChernClass, Cycle, Lattice};

use super::OptError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LauferStep {
    /// The cycle before the step.
    pub cycle: Cycle,
    /// First vertex in file order with `(cycle, E_v) > 0`.
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationSequence {
    pub steps: Vec<LauferStep>,
    pub terminal: Cycle,
}

/// Result of pushing a class into the Lipman cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    /// The integral cycle added to the starting class.
    pub added: Cycle,
    pub terminal: ChernClass,
    pub vertices: Vec<usize>,
}

/// Adds `E_v` while some pairing is positive; `pairing` is updated in place.
fn run(lat: &Lattice, x: &mut [i64], pairing: &mut [i64], mut record: impl FnMut(&[i64], usize)) {
    let form = lat.form();
    while let Some(v) = pairing.iter().position(|&p| p > 0) {
        record(x, v);
        x[v] += 1;
        for (w, p) in pairing.iter_mut().enumerate() {
            *p += form[w][v];
        }
    }
}

/// Laufer's sequence from the reduced cycle `E` to `Z_min`.
pub fn laufer_zmin(lat: &Lattice) -> Result<ComputationSequence, OptError> {
    if lat.is_empty() {
        return Err(OptError::EmptyLattice);
    }
    if lat.components(&lat.full_set()).len() != 1 {
        return Err(OptError::Disconnected);
    }
    let mut x = vec![1i64; lat.len()];
    let mut pairing = lat.form_times(&x);
    let mut steps = Vec::new();
    run(lat, &mut x, &mut pairing, |c, v| steps.push(LauferStep { cycle: Cycle::new(c.to_vec()), vertex: v }));
    Ok(ComputationSequence { steps, terminal: Cycle::new(x) })
}

/// The smallest `s ∈ S'` with `s - l' ∈ L` effective.
pub fn laufer_saturate(lat: &Lattice, start: &ChernClass) -> Saturation {
    let mut added = vec![0i64; lat.len()];
    let mut pairing = start.pairings().to_vec();
    let mut vertices = Vec::new();
    run(lat, &mut added, &mut pairing, |_, v| vertices.push(v));
    let added = Cycle::new(added);
    let terminal = start.add(&lat.class_of_cycle(&added));
    Saturation { added, terminal, vertices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::lattice::rational;

    #[test]
    fn zmin_examples() {
        let a1 = corpus::lattice("a1").unwrap();
        let s = laufer_zmin(&a1).unwrap();
        assert_eq!(s.terminal, Cycle::new(vec![1]));
        assert!(s.steps.is_empty());
        let a2 = corpus::lattice("a2").unwrap();
        assert_eq!(laufer_zmin(&a2).unwrap().terminal, Cycle::new(vec![1, 1]));
        let star = corpus::lattice("star237").unwrap();
        let s = laufer_zmin(&star).unwrap();
        assert!(s.terminal.coeffs()[0] >= 2);
        assert!(star.lipman_contains(&star.class_of_cycle(&s.terminal)));
        for step in &s.steps {
            assert!(star.pair_cycles(&step.cycle, &Cycle::unit(4, step.vertex)) > 0);
        }
    }

    #[test]
    fn zmin_of_e8_is_the_highest_root() {
        let e8 = corpus::lattice("e8").unwrap();
        // Chain v0..v6 with v7 attached at v2.
        assert_eq!(laufer_zmin(&e8).unwrap().terminal, Cycle::new(vec![2, 4, 6, 5, 4, 3, 2, 3]));
    }

    #[test]
    fn saturate_examples() {
        let a1 = corpus::lattice("a1").unwrap();
        let zero = a1.zero_class();
        assert_eq!(laufer_saturate(&a1, &zero).terminal, zero);
        let minus_e = a1.class_of_cycle(&Cycle::new(vec![-1]));
        let s = laufer_saturate(&a1, &minus_e);
        assert!(s.terminal.is_zero());
        assert_eq!(s.added, Cycle::new(vec![1]));
        let estar = a1.dual_basis(0).unwrap();
        assert_eq!(laufer_saturate(&a1, &estar).terminal.e_coords(), &[rational(1) / rational(2)]);
    }
}
