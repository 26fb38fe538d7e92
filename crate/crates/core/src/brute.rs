//! Exhaustive reference evaluations for the test suite.
//!
//! Everything here enumerates boxes point by point and evaluates `χ` through
//! its own integer route: with `D = det(-I)`, both `D·x` and `D·Z_K` are
//! integral for `x ∈ L'`, and `2D²χ(x) = -(Dx, Dx - DZ_K)` in `i128`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graph::VertexSet;
use crate::lattice::{ChernClass, Cycle, Lattice, LatticeError};
use crate::opt::MinChiResult;
use crate::relative::{DominanceReport, OracleError, SubStructure, TowerSpec, Twist};

/// Largest number of points any single enumeration may visit.
pub const BRUTE_LIMIT: u64 = 100_000_000;

/// Deepest tower accepted by [`brute_nested`].
pub const NESTED_MAX_LAYERS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteError {
    #[error("enumeration needs {points} points, above the limit {limit}")]
    BoxTooLarge { points: u64, limit: u64 },
    #[error("box bound must be effective")]
    NotEffective,
    #[error("nested expansion supports at most {NESTED_MAX_LAYERS} layers, got {0}")]
    TooDeep(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Every integral point of `[0, bound]`, last coordinate fastest.
#[derive(Clone, Debug)]
pub struct BoxIterator {
    bound: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl BoxIterator {
    pub fn new(bound: &[i64]) -> Result<Self, BruteError> {
        if bound.iter().any(|&b| b < 0) {
            return Err(BruteError::NotEffective);
        }
        Ok(BoxIterator { bound: bound.to_vec(), next: Some(vec![0; bound.len()]) })
    }

    /// Guarded constructor for a top-level enumeration.
    pub fn guarded(bound: &[i64]) -> Result<Self, BruteError> {
        let it = Self::new(bound)?;
        let points = it.points();
        if points > BRUTE_LIMIT {
            return Err(BruteError::BoxTooLarge { points, limit: BRUTE_LIMIT });
        }
        Ok(it)
    }

    /// `Π (bound_v + 1)`, saturating.
    pub fn points(&self) -> u64 {
        self.bound.iter().fold(1u64, |acc, &b| acc.saturating_mul(b as u64 + 1))
    }
}

impl Iterator for BoxIterator {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if succ[k] < self.bound[k] {
                succ[k] += 1;
                for c in &mut succ[k + 1..] {
                    *c = 0;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

/// `χ` scaled by `2D²`.
struct ScaledChi {
    d: i128,
    form: Vec<Vec<i128>>,
    k: Vec<i128>,
}

fn scaled(q: &BigRational, d: &BigInt) -> i128 {
    let y = q * BigRational::from_integer(d.clone());
    assert!(y.is_integer(), "D times a dual class is integral");
    y.to_integer().to_i128().expect("scaled coordinate fits i128")
}

impl ScaledChi {
    fn new(lat: &Lattice) -> Self {
        let det = lat.det_h();
        let form = lat.form().iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
        let k = lat.zk().iter().map(|q| scaled(q, det)).collect();
        ScaledChi { d: det.to_i128().expect("det fits i128"), form, k }
    }

    fn coords(&self, lat: &Lattice, base: &ChernClass) -> Vec<i128> {
        base.e_coords().iter().map(|q| scaled(q, lat.det_h())).collect()
    }

    /// `2D²χ(base + l)` where `y_base = D·base`.
    fn at(&self, y_base: &[i128], l: &[i64]) -> i128 {
        let y: Vec<i128> = y_base.iter().zip(l).map(|(b, &x)| b + self.d * x as i128).collect();
        let mut total = 0i128;
        for (v, row) in self.form.iter().enumerate() {
            let mut iy = 0i128;
            for (w, &a) in row.iter().enumerate() {
                iy += a * (y[w] - self.k[w]);
            }
            total -= y[v] * iy;
        }
        total
    }

    fn denom(&self) -> i128 {
        2 * self.d * self.d
    }

    /// An integral difference of two scaled values.
    fn diff(&self, a: i128, b: i128) -> i64 {
        let num = a - b;
        assert_eq!(num % self.denom(), 0, "χ difference over L is integral");
        (num / self.denom()) as i64
    }

    fn value(&self, a: i128) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(self.denom()))
    }
}

/// `min χ(base + l)` over `0 ≤ l ≤ bound`, first minimizer in lexicographic order.
pub fn brute_min_chi(lat: &Lattice, base: &ChernClass, bound: &Cycle) -> Result<MinChiResult, BruteError> {
    lat.check_class(base)?;
    lat.check_cycle(bound)?;
    let chi = ScaledChi::new(lat);
    let yb = chi.coords(lat, base);
    let mut best: Option<(i128, Vec<i64>)> = None;
    let mut explored = 0;
    for l in BoxIterator::guarded(bound.coeffs())? {
        explored += 1;
        let s = chi.at(&yb, &l);
        if best.as_ref().is_none_or(|(b, _)| s < *b) {
            best = Some((s, l));
        }
    }
    let (s, l) = best.expect("box contains the origin");
    Ok(MinChiResult { value: chi.value(s), argmin: Cycle::new(l), explored })
}

/// `min χ(l)` over `0 < l ≤ bound`, or `None` for the box `{0}`.
pub fn brute_min_chi_positive(lat: &Lattice, bound: &Cycle) -> Result<Option<MinChiResult>, BruteError> {
    lat.check_cycle(bound)?;
    let chi = ScaledChi::new(lat);
    let yb = vec![0i128; lat.len()];
    let mut best: Option<(i128, Vec<i64>)> = None;
    let mut explored = 0;
    for l in BoxIterator::guarded(bound.coeffs())?.skip(1) {
        explored += 1;
        let s = chi.at(&yb, &l);
        if best.as_ref().is_none_or(|(b, _)| s < *b) {
            best = Some((s, l));
        }
    }
    Ok(best.map(|(s, l)| MinChiResult { value: chi.value(s), argmin: Cycle::new(l), explored }))
}

/// Nonzero integral cycles `l ≤ bound` with `(l, E_v) ≤ 0` for all `v`.
pub fn brute_lipman_cycles(lat: &Lattice, bound: &Cycle) -> Result<Vec<Cycle>, BruteError> {
    let mut out = Vec::new();
    for l in BoxIterator::guarded(bound.coeffs())?.skip(1) {
        let c = Cycle::new(l);
        if lat.lipman_contains(&lat.class_of_cycle(&c)) {
            out.push(c);
        }
    }
    Ok(out)
}

fn oracle_at(lat: &Lattice, sub: &SubStructure, z: &[i64], l: &[i64], twist: &ChernClass) -> Result<i64, BruteError> {
    let a: Vec<i64> = (0..l.len()).map(|v| if sub.v1.contains(v) { z[v] - l[v] } else { 0 }).collect();
    if a.iter().all(|&c| c == 0) {
        return Ok(0);
    }
    let t = twist.sub(&lat.class_of_cycle(&Cycle::new(l.to_vec())));
    Ok(sub.oracle.evaluate(&Cycle::new(a), &Twist::of(&t))? as i64)
}

/// Evaluates the strict dominance inequality at every `0 < l ≤ Z`; the
/// witness is the first violation in lexicographic order.
pub fn brute_dominant(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
) -> Result<DominanceReport, BruteError> {
    lat.check_class(l)?;
    let chi = ScaledChi::new(lat);
    let yb = chi.coords(lat, &l.neg());
    let zero = vec![0i64; lat.len()];
    let lhs_chi = chi.at(&yb, &zero);
    let lhs_oracle = oracle_at(lat, sub, z.coeffs(), &zero, l)?;
    let mut margin: Option<i64> = None;
    let mut witness = None;
    let mut explored = 0;
    for m in BoxIterator::guarded(z.coeffs())?.skip(1) {
        explored += 1;
        // RHS - LHS = [χ(-l' + m) - χ(-l')] - h¹((Z - m)_1, ·) + h¹(Z_1, ·).
        let slack = chi.diff(chi.at(&yb, &m), lhs_chi) - oracle_at(lat, sub, z.coeffs(), &m, l)? + lhs_oracle;
        if slack < 1 && witness.is_none() {
            witness = Some(Cycle::new(m.clone()));
        }
        margin = Some(margin.map_or(slack, |s: i64| s.min(slack)));
    }
    Ok(DominanceReport { dominant: witness.is_none(), witness, margin, explored })
}

/// `χ(-l') - min_{0≤l≤Z} {χ(-l' + l) - h¹((Z - l)_1, O(l' - l))}` with its
/// first minimizer.
pub fn brute_h1_relative(
    lat: &Lattice,
    z: &Cycle,
    l: &ChernClass,
    sub: &SubStructure,
) -> Result<(u64, Cycle), BruteError> {
    lat.check_class(l)?;
    let chi = ScaledChi::new(lat);
    let yb = chi.coords(lat, &l.neg());
    let zero = vec![0i64; lat.len()];
    let at0 = chi.at(&yb, &zero);
    let mut best: Option<(i64, Vec<i64>)> = None;
    for m in BoxIterator::guarded(z.coeffs())? {
        let t = chi.diff(chi.at(&yb, &m), at0) - oracle_at(lat, sub, z.coeffs(), &m, l)?;
        if best.as_ref().is_none_or(|(b, _)| t < *b) {
            best = Some((t, m));
        }
    }
    let (t, m) = best.expect("box contains the origin");
    Ok((u64::try_from(-t).expect("l = 0 bounds the minimum"), Cycle::new(m)))
}

/// `max_{0≤l≤Z} {χ(Z - l, L(-l)) + h¹((Z - l)_1, O(l' - l))}`.
pub fn brute_h0_relative(lat: &Lattice, z: &Cycle, l: &ChernClass, sub: &SubStructure) -> Result<u64, BruteError> {
    lat.check_class(l)?;
    let chi = ScaledChi::new(lat);
    let yb = chi.coords(lat, &l.neg());
    // χ(Z - l, L(-l)) = χ(-l' + Z) - χ(-l' + l).
    let top = chi.at(&yb, z.coeffs());
    let mut best: Option<i64> = None;
    for m in BoxIterator::guarded(z.coeffs())? {
        let value = chi.diff(top, chi.at(&yb, &m)) + oracle_at(lat, sub, z.coeffs(), &m, l)?;
        best = Some(best.map_or(value, |b| b.max(value)));
    }
    Ok(u64::try_from(best.expect("box contains the origin")).expect("l = Z contributes 0"))
}

/// `Σ_C 1 - min_{E_C ≤ l ≤ Z_C} (χ(l) - h¹((Z_C - l)_1, O(-l)))`.
pub fn brute_h1_oz(lat: &Lattice, z: &Cycle, sub: &SubStructure) -> Result<u64, BruteError> {
    lat.check_cycle(z)?;
    if !z.is_effective() {
        return Err(BruteError::NotEffective);
    }
    let chi = ScaledChi::new(lat);
    let y0 = vec![0i128; lat.len()];
    let origin = chi.at(&y0, &vec![0; lat.len()]);
    let zero = lat.zero_class();
    let mut total = 0u64;
    for comp in lat.components(&z.support()) {
        let zc = z.truncate(&comp);
        let mut best: Option<i64> = None;
        for m in BoxIterator::guarded(zc.coeffs())? {
            if comp.iter().any(|v| m[v] == 0) {
                continue;
            }
            let t = chi.diff(chi.at(&y0, &m), origin) - oracle_at(lat, sub, zc.coeffs(), &m, &zero)?;
            best = Some(best.map_or(t, |b| b.min(t)));
        }
        total += u64::try_from(1 - best.expect("E_C lies in the box")).expect("χ(E_C) = 1");
    }
    Ok(total)
}

struct Nested<'a> {
    lat: &'a Lattice,
    chi: ScaledChi,
    prefixes: Vec<VertexSet>,
    budget: u64,
}

impl Nested<'_> {
    /// `N_m(A, t) = -min_{0≤l≤A} {χ(l) + (t, l) - N_{m-1}(min(A - l, A|P_{m-1}), t - l)}`.
    fn eval(&mut self, m: usize, a: &[i64], t: &ChernClass) -> Result<i64, BruteError> {
        if m == 0 || a.iter().all(|&c| c == 0) {
            return Ok(0);
        }
        let y0 = vec![0i128; a.len()];
        let origin = self.chi.at(&y0, &vec![0; a.len()]);
        let mut best: Option<i64> = None;
        for l in BoxIterator::new(a)? {
            if self.budget == 0 {
                return Err(BruteError::BoxTooLarge { points: BRUTE_LIMIT + 1, limit: BRUTE_LIMIT });
            }
            self.budget -= 1;
            let lc = Cycle::new(l.clone());
            let delta = self.chi.diff(self.chi.at(&y0, &l), origin) + self.lat.pair_cycle(&lc, t);
            let inner = if m == 1 {
                0
            } else {
                let lower = &self.prefixes[m - 2];
                let rest: Vec<i64> = (0..a.len()).map(|v| if lower.contains(v) { a[v] - l[v] } else { 0 }).collect();
                self.eval(m - 1, &rest, &t.sub(&self.lat.class_of_cycle(&lc)))?
            };
            let value = delta - inner;
            best = Some(best.map_or(value, |b| b.min(value)));
        }
        Ok(-best.expect("box contains the origin"))
    }
}

/// Literal, unmemoized expansion of the layer-by-layer recursion for the
/// top layer of `tower`.
pub fn brute_nested(lat: &Lattice, tower: &TowerSpec, z: &Cycle, l: &ChernClass) -> Result<u64, BruteError> {
    lat.check_class(l)?;
    lat.check_cycle(z)?;
    if !z.is_effective() {
        return Err(BruteError::NotEffective);
    }
    let k = tower.len();
    if k > NESTED_MAX_LAYERS {
        return Err(BruteError::TooDeep(k));
    }
    let prefixes = (1..=k).map(|j| tower.prefix(j)).collect();
    let mut nested = Nested { lat, chi: ScaledChi::new(lat), prefixes, budget: BRUTE_LIMIT };
    let value = nested.eval(k, z.coeffs(), l)?;
    Ok(u64::try_from(value).expect("l = 0 bounds the minimum"))
}

/// `χ(x)` through the scaled route, for cross-checks of the lattice layer.
pub fn brute_chi(lat: &Lattice, x: &ChernClass) -> BigRational {
    let chi = ScaledChi::new(lat);
    let y = chi.coords(lat, x);
    chi.value(chi.at(&y, &vec![0; lat.len()]))
}
