//! Integer minimization of `q(x) = xᵀAx + c·x` over a box `0 ≤ x ≤ u`,
//! where `A = -I` is a positive definite Z-matrix (a Stieltjes matrix).
//!
//! Both strategies return the lexicographically first minimizer.

use std::collections::HashMap;
use std::rc::Rc;

use crate::exec::{advance, decode, for_chunks, map_ordered, ExecMode};
use crate::linalg;

/// Minimum number of independent subtrees handed to the executor.
const MIN_TASKS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMin {
    pub value: i128,
    pub argmin: Vec<i64>,
    pub explored: u64,
}

#[derive(Clone, Debug)]
pub struct QuadProblem {
    a: Vec<Vec<i64>>,
    cols: Vec<Vec<(usize, i64)>>,
    c: Vec<i64>,
    upper: Vec<i64>,
}

impl QuadProblem {
    pub fn new(a: Vec<Vec<i64>>, c: Vec<i64>, upper: Vec<i64>) -> Self {
        let cols =
            (0..a.len()).map(|j| (0..a.len()).filter(|&i| a[i][j] != 0).map(|i| (i, a[i][j])).collect()).collect();
        QuadProblem { a, cols, c, upper }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn points(&self) -> u64 {
        self.upper.iter().fold(1u64, |acc, &b| acc.saturating_mul(b as u64 + 1))
    }

    /// Crude bound on `|q|` over the box, used to rule out `i128` overflow.
    pub fn magnitude_bound(&self) -> i128 {
        let n = self.len();
        let mut total: i128 = 0;
        for i in 0..n {
            let ui = self.upper[i] as i128;
            total = total.saturating_add((self.c[i] as i128).abs().saturating_mul(ui));
            for &(j, aij) in &self.cols[i] {
                let uj = self.upper[j] as i128;
                total = total.saturating_add((aij as i128).abs().saturating_mul(ui).saturating_mul(uj));
            }
        }
        total
    }

    pub fn eval(&self, x: &[i64]) -> i128 {
        let mut v: i128 = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for &(j, aij) in &self.cols[i] {
                row += aij as i128 * x[j] as i128;
            }
            v += xi as i128 * (row + self.c[i] as i128);
        }
        v
    }

    /// Full scan in lexicographic order, split into fixed chunks.
    pub fn exhaustive(&self, mode: ExecMode) -> QuadMin {
        let n = self.len();
        let parts = for_chunks(self.points(), mode, |start, end| {
            let mut x = vec![0i64; n];
            decode(start, &self.upper, &mut x);
            let mut ax: Vec<i128> =
                (0..n).map(|i| self.cols[i].iter().map(|&(j, a)| a as i128 * x[j] as i128).sum()).collect();
            let mut value = self.eval(&x);
            let mut best = (value, x.clone());
            for _ in start + 1..end {
                let k = advance(&mut x, &self.upper).expect("chunk stays inside the box");
                for j in k + 1..n {
                    if self.upper[j] > 0 {
                        self.shift(&mut ax, &mut value, j, -self.upper[j]);
                    }
                }
                self.shift(&mut ax, &mut value, k, 1);
                if value < best.0 {
                    best = (value, x.clone());
                }
            }
            (best, end - start)
        });
        let mut out: Option<QuadMin> = None;
        let mut explored = 0;
        for ((value, argmin), count) in parts {
            explored += count;
            if out.as_ref().is_none_or(|b| value < b.value) {
                out = Some(QuadMin { value, argmin, explored: 0 });
            }
        }
        let mut out = out.unwrap_or(QuadMin { value: 0, argmin: vec![0; n], explored: 0 });
        out.explored = explored;
        out
    }

    fn shift(&self, ax: &mut [i128], value: &mut i128, j: usize, d: i64) {
        let d = d as i128;
        *value += d * (2 * ax[j] + self.a[j][j] as i128 * d + self.c[j] as i128);
        for &(i, aij) in &self.cols[j] {
            ax[i] += aij as i128 * d;
        }
    }

    /// Depth-first branch-and-bound in coordinate order. Bounds come from the
    /// exact continuous minimum over the nonnegative orthant of the free
    /// coordinates, which for a Stieltjes matrix is found by the
    /// Chandrasekaran complementary pivoting scheme.
    pub fn branch_and_bound(&self, mode: ExecMode) -> QuadMin {
        let n = self.len();
        if n == 0 {
            return QuadMin { value: 0, argmin: Vec::new(), explored: 1 };
        }
        let mut root = Search::new(self, i128::MAX);
        let h0: Vec<i128> = self.c.iter().map(|&c| c as i128).collect();
        let root_sol = root.lcp(0, &h0);
        let incumbent_x = root.incumbent(root_sol.as_ref());
        let incumbent = self.eval(&incumbent_x);
        root.incumbent = incumbent;

        let mut tasks = vec![Node { x: Vec::new(), qfix: 0, h: h0, tstar: root_sol.map(|s| s.tstar(0)) }];
        let mut explored = 1u64;
        let mut depth = 0;
        while tasks.len() < MIN_TASKS && depth + 1 < n {
            let mut next = Vec::new();
            for node in &tasks {
                root.expand(depth, node, |child| next.push(child));
            }
            tasks = next;
            depth += 1;
        }
        explored += root.explored;

        let results = map_ordered(mode, tasks, |node| {
            let mut s = Search::new(self, incumbent);
            let mut x = node.x.clone();
            x.resize(n, 0);
            s.x = x;
            s.descend(depth, &node);
            (s.best, s.explored)
        });
        let mut best: Option<(i128, Vec<i64>)> = None;
        for (found, count) in results {
            explored += count;
            if let Some((v, x)) = found {
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, x));
                }
            }
        }
        let (value, argmin) = best.expect("the incumbent lies in an unpruned subtree");
        debug_assert!(value <= incumbent);
        QuadMin { value, argmin, explored }
    }
}

/// A partial assignment of the first `x.len()` coordinates.
#[derive(Clone, Debug)]
struct Node {
    x: Vec<i64>,
    /// `q` restricted to the fixed coordinates.
    qfix: i128,
    /// Linear coefficients of the free coordinates given the fixed ones.
    h: Vec<i128>,
    /// Continuous minimizer of the next coordinate as `num/den`.
    tstar: Option<(i128, i128)>,
}

struct LcpSolution {
    active: Vec<usize>,
    /// `adj(M_JJ) h_J`; the minimizer is `y_J = -u / (2 det)`.
    u: Vec<i128>,
    det: i128,
    h_active: Vec<i128>,
}

impl LcpSolution {
    /// Minimum value as `num/den`, `den > 0`.
    fn value(&self) -> Option<(i128, i128)> {
        let mut num: i128 = 0;
        for (h, u) in self.h_active.iter().zip(&self.u) {
            num = num.checked_sub(h.checked_mul(*u)?)?;
        }
        Some((num, self.det.checked_mul(4)?))
    }

    fn tstar(&self, k: usize) -> (i128, i128) {
        match self.active.first() {
            Some(&first) if first == k => (-self.u[0], 2 * self.det),
            _ => (0, 1),
        }
    }
}

/// Determinant and adjugate of an active principal submatrix.
type Adjugate = Rc<(i128, Vec<Vec<i128>>)>;

struct Search<'p> {
    p: &'p QuadProblem,
    incumbent: i128,
    cache: HashMap<Vec<usize>, Option<Adjugate>>,
    best: Option<(i128, Vec<i64>)>,
    explored: u64,
    x: Vec<i64>,
}

fn ceil_div(num: i128, den: i128) -> i128 {
    -((-num).div_euclid(den))
}

impl<'p> Search<'p> {
    fn new(p: &'p QuadProblem, incumbent: i128) -> Self {
        Search { p, incumbent, cache: HashMap::new(), best: None, explored: 0, x: vec![0; p.len()] }
    }

    fn pruned(&self, lb: i128) -> bool {
        lb > self.incumbent || self.best.as_ref().is_some_and(|(b, _)| lb >= *b)
    }

    fn adjugate(&mut self, active: &[usize]) -> Option<Adjugate> {
        if let Some(hit) = self.cache.get(active) {
            return hit.clone();
        }
        let m: Vec<Vec<i64>> = active.iter().map(|&i| active.iter().map(|&j| self.p.a[i][j]).collect()).collect();
        let entry = linalg::adjugate_i128(&m).map(Rc::new);
        self.cache.insert(active.to_vec(), entry.clone());
        entry
    }

    /// Minimizes `yᵀMy + h·y` over `y ≥ 0` for the free coordinates `k..n`.
    fn lcp(&mut self, k: usize, h: &[i128]) -> Option<LcpSolution> {
        let n = self.p.len();
        let mut in_active = vec![false; n];
        let mut active: Vec<usize> = (k..n).filter(|&i| h[i] < 0).collect();
        for &i in &active {
            in_active[i] = true;
        }
        loop {
            if active.is_empty() {
                return Some(LcpSolution { active, u: Vec::new(), det: 1, h_active: Vec::new() });
            }
            let adj = self.adjugate(&active)?;
            let (det, ref m) = *adj;
            let h_active: Vec<i128> = active.iter().map(|&i| h[i]).collect();
            let mut u = vec![0i128; active.len()];
            for (r, row) in m.iter().enumerate() {
                let mut acc: i128 = 0;
                for (entry, hv) in row.iter().zip(&h_active) {
                    acc = acc.checked_add(entry.checked_mul(*hv)?)?;
                }
                u[r] = acc;
            }
            let mut grew = false;
            for i in k..n {
                if in_active[i] {
                    continue;
                }
                let mut s = h[i].checked_mul(det)?;
                for (idx, &j) in active.iter().enumerate() {
                    let aij = self.p.a[i][j];
                    if aij != 0 {
                        s = s.checked_sub((aij as i128).checked_mul(u[idx])?)?;
                    }
                }
                if s < 0 {
                    in_active[i] = true;
                    grew = true;
                }
            }
            if !grew {
                debug_assert!(u.iter().all(|&v| v <= 0), "LCP solution must be nonnegative");
                return Some(LcpSolution { active, u, det, h_active });
            }
            active = (k..n).filter(|&i| in_active[i]).collect();
        }
    }

    /// Rounded continuous minimizer improved by coordinate descent.
    fn incumbent(&self, sol: Option<&LcpSolution>) -> Vec<i64> {
        let p = self.p;
        let n = p.len();
        let mut x = vec![0i64; n];
        if let Some(sol) = sol {
            for (idx, &i) in sol.active.iter().enumerate() {
                let r = (-sol.u[idx] + sol.det).div_euclid(2 * sol.det);
                x[i] = r.clamp(0, p.upper[i] as i128) as i64;
            }
        }
        for _ in 0..4 * n + 4 {
            let mut changed = false;
            for i in 0..n {
                let mut h = p.c[i] as i128;
                for &(j, aij) in &p.cols[i] {
                    if j != i {
                        h += 2 * aij as i128 * x[j] as i128;
                    }
                }
                let t = best_in_interval(p.a[i][i] as i128, h, p.upper[i]);
                let a = p.a[i][i] as i128;
                let f = |t: i128| a * t * t + h * t;
                if f(t as i128) < f(x[i] as i128) {
                    x[i] = t;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        x
    }

    /// Children of `node` (which fixes coordinates `0..k`) that survive
    /// pruning.
    fn expand(&mut self, k: usize, node: &Node, mut emit: impl FnMut(Node)) {
        let p = self.p;
        let n = p.len();
        let akk = p.a[k][k] as i128;
        for t in 0..=p.upper[k] {
            let ti = t as i128;
            let qfix = node.qfix + akk * ti * ti + node.h[k] * ti;
            let mut h = node.h.clone();
            for &(i, aik) in &p.cols[k] {
                if i > k {
                    h[i] += 2 * aik as i128 * ti;
                }
            }
            self.explored += 1;
            let sol = self.lcp(k + 1, &h);
            let lb = sol
                .as_ref()
                .and_then(LcpSolution::value)
                .and_then(|(num, den)| qfix.checked_add(ceil_div(num, den)))
                .unwrap_or(i128::MIN);
            if self.pruned(lb) {
                let past_minimum = node.tstar.is_some_and(|(num, den)| ti * den >= num);
                if past_minimum {
                    break;
                }
                continue;
            }
            let mut x = node.x.clone();
            x.push(t);
            let tstar = if k + 1 < n { sol.map(|s| s.tstar(k + 1)) } else { None };
            emit(Node { x, qfix, h, tstar });
        }
    }

    fn descend(&mut self, k: usize, node: &Node) {
        let p = self.p;
        let n = p.len();
        if k + 1 == n {
            let t = best_in_interval(p.a[k][k] as i128, node.h[k], p.upper[k]);
            let ti = t as i128;
            let value = node.qfix + p.a[k][k] as i128 * ti * ti + node.h[k] * ti;
            self.explored += 1;
            if self.best.as_ref().is_none_or(|(b, _)| value < *b) {
                self.x[k] = t;
                self.best = Some((value, self.x.clone()));
            }
            return;
        }
        let akk = p.a[k][k] as i128;
        for t in 0..=p.upper[k] {
            let ti = t as i128;
            let qfix = node.qfix + akk * ti * ti + node.h[k] * ti;
            let mut h = node.h.clone();
            for &(i, aik) in &p.cols[k] {
                if i > k {
                    h[i] += 2 * aik as i128 * ti;
                }
            }
            self.explored += 1;
            let sol = self.lcp(k + 1, &h);
            let lb = sol
                .as_ref()
                .and_then(LcpSolution::value)
                .and_then(|(num, den)| qfix.checked_add(ceil_div(num, den)))
                .unwrap_or(i128::MIN);
            if self.pruned(lb) {
                if node.tstar.is_some_and(|(num, den)| ti * den >= num) {
                    break;
                }
                continue;
            }
            self.x[k] = t;
            let child = Node { x: Vec::new(), qfix, h, tstar: sol.map(|s| s.tstar(k + 1)) };
            self.descend(k + 1, &child);
        }
        self.x[k] = 0;
    }
}

/// Smallest minimizer of `a t² + h t` over integers `0 ≤ t ≤ u` (`a > 0`).
fn best_in_interval(a: i128, h: i128, u: i64) -> i64 {
    let u = u as i128;
    let lo = (-h).div_euclid(2 * a).clamp(0, u);
    let hi = (lo + 1).min(u);
    let f = |t: i128| a * t * t + h * t;
    if f(hi) < f(lo) {
        hi as i64
    } else {
        lo as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(p: &QuadProblem) -> (i128, Vec<i64>) {
        let n = p.len();
        let mut x = vec![0; n];
        let mut best = (p.eval(&x), x.clone());
        while advance(&mut x, p.upper()).is_some() {
            let v = p.eval(&x);
            if v < best.0 {
                best = (v, x.clone());
            }
        }
        best
    }

    fn chain(n: usize, diag: i64) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0; n]; n];
        for i in 0..n {
            a[i][i] = diag;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        a
    }

    #[test]
    fn interval_minimizer_prefers_smaller_on_ties() {
        assert_eq!(best_in_interval(1, -2, 5), 1);
        assert_eq!(best_in_interval(1, -1, 5), 0);
        assert_eq!(best_in_interval(1, -3, 5), 1);
        assert_eq!(best_in_interval(1, -20, 4), 4);
        assert_eq!(best_in_interval(2, 3, 4), 0);
    }

    #[test]
    fn strategies_agree_with_brute_force() {
        let cases = [
            (chain(3, 2), vec![-3, 1, -5], vec![4, 4, 4]),
            (chain(4, 2), vec![0, 0, 0, 0], vec![3, 2, 3, 1]),
            (chain(4, 3), vec![-7, -2, -9, 4], vec![4, 4, 4, 4]),
            (chain(2, 2), vec![-2, -2], vec![3, 3]),
            (chain(1, 2), vec![-5], vec![6]),
        ];
        for (a, c, u) in cases {
            let p = QuadProblem::new(a, c, u);
            let (v, x) = brute(&p);
            for mode in [ExecMode::Sequential, ExecMode::Parallel] {
                let e = p.exhaustive(mode);
                assert_eq!((e.value, e.argmin.clone()), (v, x.clone()));
                assert_eq!(e.explored, p.points());
                let b = p.branch_and_bound(mode);
                assert_eq!((b.value, b.argmin), (v, x.clone()));
            }
            assert_eq!(
                p.branch_and_bound(ExecMode::Sequential).explored,
                p.branch_and_bound(ExecMode::Parallel).explored
            );
        }
    }

    #[test]
    fn bnb_handles_large_boxes() {
        let a = chain(6, 2);
        let c = vec![-40, 3, -11, 0, 5, -30];
        let p = QuadProblem::new(a, c, vec![1000; 6]);
        let b = p.branch_and_bound(ExecMode::Sequential);
        assert!(b.explored < 1_000_000);
        // Local optimality in every unit direction.
        for i in 0..6 {
            for d in [-1i64, 1] {
                let mut y = b.argmin.clone();
                y[i] += d;
                if (0..=1000).contains(&y[i]) {
                    assert!(p.eval(&y) >= b.value);
                }
            }
        }
    }
}
