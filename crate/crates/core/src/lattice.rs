//! The intersection lattice `L`, its dual `L'`, cycles and Chern classes.
//!
//! Cycles are integral vectors in the `E_v` basis. Chern classes are rational
//! vectors in the same basis and carry their integer pairings `(l', E_v)`
//! alongside, which is what every hot loop actually consumes.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{PlumbingGraph, VertexSet};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not negative definite: leading minor of order {order} of -I is {minor} (at vertex {vertex:?})")]
    NotNegativeDefinite { order: usize, minor: BigInt, vertex: String },
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not an element of the dual lattice: pairing with E_{vertex} is {pairing}")]
    NotInDual { vertex: String, pairing: String },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `"p/q"`, or `"n"` when integral.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// An integral cycle `l = Σ n_v E_v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle(Vec<i64>);

impl Cycle {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Cycle(coeffs)
    }

    pub fn zero(n: usize) -> Self {
        Cycle(vec![0; n])
    }

    /// The reduced cycle `E_S = Σ_{v∈S} E_v`.
    pub fn reduced(set: &VertexSet) -> Self {
        Cycle(set.mask().iter().map(|&b| i64::from(b)).collect())
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut c = Self::zero(n);
        c.0[v] = 1;
        c
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_mask(self.0.iter().map(|&c| c != 0).collect())
    }

    /// Coefficientwise `self ≤ other`.
    pub fn le(&self, other: &Cycle) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn meet(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn join(&self, other: &Cycle) -> Cycle {
        Cycle(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn scale(&self, k: i64) -> Cycle {
        Cycle(self.0.iter().map(|a| a * k).collect())
    }

    /// Coefficients kept on `set`, zeroed elsewhere.
    pub fn truncate(&self, set: &VertexSet) -> Cycle {
        Cycle(self.0.iter().enumerate().map(|(v, &c)| if set.contains(v) { c } else { 0 }).collect())
    }

    /// Number of lattice points in the box `[0, self]`, saturating.
    pub fn box_points(&self) -> u64 {
        self.0
            .iter()
            .fold(1u64, |acc, &c| acc.saturating_mul(u64::try_from(c.max(0)).unwrap_or(u64::MAX).saturating_add(1)))
    }
}

/// An element of `L' ⊂ L ⊗ Q`, stored by its `E_v`-coordinates together with
/// the integer pairings `(l', E_v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernClass {
    e: Vec<BigRational>,
    pairing: Vec<i64>,
}

impl ChernClass {
    pub fn e_coords(&self) -> &[BigRational] {
        &self.e
    }

    /// `((l', E_v))_v`.
    pub fn pairings(&self) -> &[i64] {
        &self.pairing
    }

    /// Integer `E*`-coordinates `a_v` with `l' = Σ a_v E*_v`, i.e. `-(l', E_v)`.
    pub fn estar_coords(&self) -> Vec<i64> {
        self.pairing.iter().map(|p| -p).collect()
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.pairing.iter().all(|&p| p == 0)
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().all(BigRational::is_integer)
    }

    /// Coefficientwise `≥ 0`.
    pub fn is_effective(&self) -> bool {
        self.e.iter().all(|q| !q.is_negative())
    }

    pub fn as_cycle(&self) -> Option<Cycle> {
        self.e
            .iter()
            .map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()
            .map(Cycle)
    }

    pub fn neg(&self) -> ChernClass {
        ChernClass { e: self.e.iter().map(|q| -q).collect(), pairing: self.pairing.iter().map(|p| -p).collect() }
    }

    pub fn add(&self, other: &ChernClass) -> ChernClass {
        ChernClass {
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
            pairing: self.pairing.iter().zip(&other.pairing).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ChernClass) -> ChernClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> ChernClass {
        let kq = rational(k);
        ChernClass {
            e: self.e.iter().map(|q| q * &kq).collect(),
            pairing: self.pairing.iter().map(|p| p * k).collect(),
        }
    }
}

/// The exact intersection lattice of a plumbing tree or of an induced
/// subgraph of one.
#[derive(Clone, Debug)]
pub struct Lattice {
    ids: Vec<String>,
    euler: Vec<i64>,
    adjacency: Vec<Vec<usize>>,
    form: Vec<Vec<i64>>,
    inverse: Vec<Vec<BigRational>>,
    det_h: BigInt,
    zk: Vec<BigRational>,
}

/// A class restricted to the sublattice of an induced subgraph.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub lattice: Lattice,
    /// Ambient index of each sublattice vertex.
    pub embedding: Vec<usize>,
    pub class: ChernClass,
}

impl Lattice {
    /// Assembles the intersection form and verifies negative definiteness.
    pub fn new(g: &PlumbingGraph) -> Result<Lattice, LatticeError> {
        let ids = g.vertices().iter().map(|v| v.id.clone()).collect();
        let euler = g.vertices().iter().map(|v| v.euler).collect();
        Self::assemble(ids, euler, g.adjacency(), true)
    }

    fn assemble(
        ids: Vec<String>,
        euler: Vec<i64>,
        adjacency: Vec<Vec<usize>>,
        check: bool,
    ) -> Result<Lattice, LatticeError> {
        let n = ids.len();
        let mut form = vec![vec![0i64; n]; n];
        for v in 0..n {
            form[v][v] = euler[v];
            for &w in &adjacency[v] {
                form[v][w] = 1;
            }
        }
        let big = |m: &[Vec<i64>], sign: i64| -> Vec<Vec<BigInt>> {
            m.iter().map(|r| r.iter().map(|&x| BigInt::from(sign * x)).collect()).collect()
        };
        if check {
            let minors = linalg::leading_minors(&big(&form, -1));
            if let Some((k, m)) = minors.iter().enumerate().find(|(_, m)| !m.is_positive()) {
                return Err(LatticeError::NotNegativeDefinite {
                    order: k + 1,
                    minor: m.clone(),
                    vertex: ids[k].clone(),
                });
            }
        }
        let i_big = big(&form, 1);
        let rhs: Vec<Vec<BigInt>> = (0..n)
            .map(|v| {
                let mut row = vec![BigInt::zero(); n + 1];
                row[v] = BigInt::one();
                row[n] = BigInt::from(euler[v] + 2);
                row
            })
            .collect();
        let sol = linalg::solve(&i_big, &rhs).expect("negative definite form is invertible");
        let inverse: Vec<Vec<BigRational>> = sol
            .numerators
            .iter()
            .map(|row| row[..n].iter().map(|x| BigRational::new(x.clone(), sol.det.clone())).collect())
            .collect();
        let zk = sol.numerators.iter().map(|row| BigRational::new(row[n].clone(), sol.det.clone())).collect();
        // det(-I) = (-1)^n det(I)
        let det_h = if n.is_multiple_of(2) { sol.det.clone() } else { -sol.det.clone() };
        Ok(Lattice { ids, euler, adjacency, form, inverse, det_h: det_h.abs(), zk })
    }

    /// Sublattice of the subgraph induced on `set` (possibly empty or
    /// disconnected). Vertex order follows the ambient order.
    pub fn induced(&self, set: &VertexSet) -> (Lattice, Vec<usize>) {
        let embedding: Vec<usize> = set.iter().collect();
        let mut local = vec![usize::MAX; self.len()];
        for (i, &v) in embedding.iter().enumerate() {
            local[v] = i;
        }
        let ids = embedding.iter().map(|&v| self.ids[v].clone()).collect();
        let euler = embedding.iter().map(|&v| self.euler[v]).collect();
        let adjacency = embedding
            .iter()
            .map(|&v| self.adjacency[v].iter().filter(|&&w| set.contains(w)).map(|&w| local[w]).collect())
            .collect();
        let lat = Self::assemble(ids, euler, adjacency, false).expect("principal submatrix stays definite");
        (lat, embedding)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize, LatticeError> {
        self.ids.iter().position(|x| x == id).ok_or_else(|| LatticeError::UnknownVertex(id.to_string()))
    }

    pub fn euler(&self) -> &[i64] {
        &self.euler
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// The intersection matrix `I`.
    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn inverse(&self) -> &[Vec<BigRational>] {
        &self.inverse
    }

    /// `|det(-I)|`, the order of `L'/L`.
    pub fn det_h(&self) -> &BigInt {
        &self.det_h
    }

    pub fn zk(&self) -> &[BigRational] {
        &self.zk
    }

    pub fn zk_class(&self) -> ChernClass {
        ChernClass { e: self.zk.clone(), pairing: self.euler.iter().map(|e| e + 2).collect() }
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn reduced_cycle(&self) -> Cycle {
        Cycle::reduced(&self.full_set())
    }

    pub fn check_cycle(&self, l: &Cycle) -> Result<(), LatticeError> {
        self.check_len(l.len())
    }

    pub fn check_class(&self, c: &ChernClass) -> Result<(), LatticeError> {
        self.check_len(c.len())
    }

    fn check_len(&self, found: usize) -> Result<(), LatticeError> {
        if found == self.len() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch { expected: self.len(), found })
        }
    }

    /// `l' = Σ a_v E*_v`.
    pub fn class_from_estar(&self, a: &[i64]) -> Result<ChernClass, LatticeError> {
        self.check_len(a.len())?;
        let e = (0..self.len())
            .map(|v| {
                let mut acc = BigRational::zero();
                for (w, &aw) in a.iter().enumerate() {
                    if aw != 0 {
                        acc -= &self.inverse[v][w] * rational(aw);
                    }
                }
                acc
            })
            .collect();
        Ok(ChernClass { e, pairing: a.iter().map(|x| -x).collect() })
    }

    /// A class from rational `E_v`-coordinates; rejects vectors outside `L'`.
    pub fn class_from_e(&self, e: Vec<BigRational>) -> Result<ChernClass, LatticeError> {
        self.check_len(e.len())?;
        let mut pairing = Vec::with_capacity(e.len());
        for v in 0..self.len() {
            let mut acc = BigRational::zero();
            for (w, q) in e.iter().enumerate() {
                if self.form[v][w] != 0 {
                    acc += q * rational(self.form[v][w]);
                }
            }
            let p = if acc.is_integer() { acc.to_integer().to_i64() } else { None };
            match p {
                Some(p) => pairing.push(p),
                None => {
                    return Err(LatticeError::NotInDual { vertex: self.ids[v].clone(), pairing: fmt_rational(&acc) })
                }
            }
        }
        Ok(ChernClass { e, pairing })
    }

    pub fn class_of_cycle(&self, l: &Cycle) -> ChernClass {
        let e = l.coeffs().iter().map(|&c| rational(c)).collect();
        ChernClass { e, pairing: self.form_times(l.coeffs()) }
    }

    pub fn zero_class(&self) -> ChernClass {
        self.class_of_cycle(&Cycle::zero(self.len()))
    }

    /// `I · x` for an integer vector.
    pub fn form_times(&self, x: &[i64]) -> Vec<i64> {
        (0..self.len())
            .map(|v| {
                let mut acc = self.euler[v] * x[v];
                for &w in &self.adjacency[v] {
                    acc += x[w];
                }
                acc
            })
            .collect()
    }

    /// `E*_v`, column `v` of `-I^{-1}`.
    pub fn dual_basis(&self, v: usize) -> Result<ChernClass, LatticeError> {
        if v >= self.len() {
            return Err(LatticeError::UnknownVertex(format!("#{v}")));
        }
        let mut a = vec![0; self.len()];
        a[v] = 1;
        self.class_from_estar(&a)
    }

    pub fn pairing(&self, a: &ChernClass, b: &ChernClass) -> Result<BigRational, LatticeError> {
        self.check_class(a)?;
        self.check_class(b)?;
        Ok(a.e.iter().zip(&b.pairing).fold(BigRational::zero(), |acc, (q, &p)| acc + q * rational(p)))
    }

    /// `(l, l')` for an integral cycle; always an integer.
    pub fn pair_cycle(&self, l: &Cycle, c: &ChernClass) -> i64 {
        l.coeffs().iter().zip(&c.pairing).map(|(a, b)| a * b).sum()
    }

    /// `(l, m)` for two cycles.
    pub fn pair_cycles(&self, l: &Cycle, m: &Cycle) -> i64 {
        l.coeffs().iter().zip(self.form_times(m.coeffs())).map(|(a, b)| a * b).sum()
    }

    /// `χ(x) = -(x, x - Z_K)/2`.
    pub fn chi(&self, x: &ChernClass) -> BigRational {
        let mut xx = BigRational::zero();
        let mut xk = BigRational::zero();
        for (v, q) in x.e.iter().enumerate() {
            xx += q * rational(x.pairing[v]);
            xk += q * rational(self.euler[v] + 2);
        }
        (xk - xx) / rational(2)
    }

    /// `χ(l)` for an integral cycle.
    pub fn chi_cycle(&self, l: &Cycle) -> i64 {
        let il = self.form_times(l.coeffs());
        let mut twice = 0i64;
        for (v, &c) in l.coeffs().iter().enumerate() {
            twice += c * (self.euler[v] + 2) - c * il[v];
        }
        twice / 2
    }

    /// Representative of the class of `l'` in `L'/L` with all coordinates in `[0, 1)`.
    pub fn class_rep(&self, c: &ChernClass) -> ChernClass {
        let floor: Vec<i64> =
            c.e.iter().map(|q| q.floor().to_integer().to_i64().expect("coordinate fits i64")).collect();
        c.sub(&self.class_of_cycle(&Cycle(floor)))
    }

    /// `R_1(l')`: keep the `E*`-coordinates on `set` and reinterpret them in
    /// the sublattice of the induced subgraph.
    pub fn restrict_class(&self, c: &ChernClass, set: &VertexSet) -> Result<Restricted, LatticeError> {
        self.check_class(c)?;
        let (lattice, embedding) = self.induced(set);
        let a: Vec<i64> = embedding.iter().map(|&v| -c.pairing[v]).collect();
        let class = lattice.class_from_estar(&a)?;
        Ok(Restricted { lattice, embedding, class })
    }

    /// `(l', E_v) ≤ 0` for all `v`.
    pub fn lipman_contains(&self, c: &ChernClass) -> bool {
        c.pairing.iter().all(|&p| p <= 0)
    }

    /// `I(l') = {v : (l', E_v) ≠ 0}`.
    pub fn estar_support(&self, c: &ChernClass) -> VertexSet {
        VertexSet::from_mask(c.pairing.iter().map(|&p| p != 0).collect())
    }

    /// Connected components of the subgraph induced on `set`, ordered by
    /// their first vertex.
    pub fn components(&self, set: &VertexSet) -> Vec<VertexSet> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in set.iter() {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::empty(n);
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in &self.adjacency[v] {
                    if set.contains(w) && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn vertex_set(&self, ids: &[&str]) -> Result<VertexSet, LatticeError> {
        let mut s = VertexSet::empty(self.len());
        for id in ids {
            s.insert(self.index_of(id)?);
        }
        Ok(s)
    }

    pub fn display_cycle<'a>(&'a self, l: &'a Cycle) -> CycleDisplay<'a> {
        CycleDisplay { ids: &self.ids, coeffs: l.coeffs() }
    }
}

/// Renders a cycle as `v0:2,v3:1`, skipping zero coefficients.
pub struct CycleDisplay<'a> {
    ids: &'a [String],
    coeffs: &'a [i64],
}

impl fmt::Display for CycleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (id, &c) in self.ids.iter().zip(self.coeffs) {
            if c != 0 {
                if !first {
                    f.write_str(",")?;
                }
                write!(f, "{id}:{c}")?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
