//! Fraction-free exact linear algebra over the integers.
//!
//! Everything here works on small dense matrices (one row per graph vertex)
//! and never leaves exact arithmetic. Bareiss elimination keeps every
//! intermediate entry an integer minor of the input, so division steps are
//! exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`, computed by
/// Bareiss elimination without pivoting.
///
/// Stops right after the first vanishing minor, since later minors cannot be
/// read off the unpivoted elimination once a pivot is zero.
pub fn leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    minors
}

/// Result of [`solve`]: `m · (numerators / det) = rhs` column by column.
#[derive(Clone, Debug)]
pub struct FractionFreeSolution {
    pub det: BigInt,
    /// `numerators[i][c]` is `det · x_i` for right-hand-side column `c`.
    pub numerators: Vec<Vec<BigInt>>,
}

/// Solves `m · X = rhs` exactly with Bareiss elimination and row pivoting.
///
/// Returns `None` when `m` is singular. `rhs` is given column-major-free as a
/// list of rows (`rhs[i][c]`).
pub fn solve(m: &[Vec<BigInt>], rhs: &[Vec<BigInt>]) -> Option<FractionFreeSolution> {
    let n = m.len();
    let cols = rhs.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> =
        m.iter().zip(rhs).map(|(row, b)| row.iter().chain(b.iter()).cloned().collect()).collect();
    let width = n + cols;
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..n {
            for j in (k + 1)..width {
                let v = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let mut det = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
    // Back substitution on the fraction-free upper triangle. `det` here is the
    // determinant of the row-permuted matrix; numerators are taken against it
    // and the sign is fixed up afterwards.
    let mut x = vec![vec![BigInt::zero(); cols]; n];
    for c in 0..cols {
        for i in (0..n).rev() {
            let mut acc = &det * &a[i][n + c];
            for j in (i + 1)..n {
                acc -= &a[i][j] * &x[j][c];
            }
            debug_assert!((&acc % &a[i][i]).is_zero());
            x[i][c] = acc / &a[i][i];
        }
    }
    if negate {
        det = -det;
        for row in &mut x {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
    Some(FractionFreeSolution { det, numerators: x })
}

/// Exact determinant with pivoting.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    solve(m, &vec![Vec::new(); m.len()]).map_or_else(BigInt::zero, |s| s.det)
}

/// Exact rational inverse, `None` if singular.
pub fn inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let identity: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let sol = solve(m, &identity)?;
    Some(
        sol.numerators
            .into_iter()
            .map(|row| row.into_iter().map(|v| BigRational::new(v, sol.det.clone())).collect())
            .collect(),
    )
}

/// Adjugate and determinant of a positive definite integer matrix, narrowed to
/// `i128` for the branch-and-bound hot loop. `None` if an entry does not fit.
pub fn adjugate_i128(m: &[Vec<i64>]) -> Option<(i128, Vec<Vec<i128>>)> {
    let n = m.len();
    let big: Vec<Vec<BigInt>> = m.iter().map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let identity: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let sol = solve(&big, &identity)?;
    let (det, adj) = if sol.det.is_negative() {
        (
            -sol.det,
            sol.numerators.into_iter().map(|r| r.into_iter().map(|v| -v).collect::<Vec<_>>()).collect::<Vec<_>>(),
        )
    } else {
        (sol.det, sol.numerators)
    };
    let det = i128::try_from(det).ok()?;
    let adj = adj
        .into_iter()
        .map(|row| row.into_iter().map(|v| i128::try_from(v).ok()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((det, adj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn minors_of_a2() {
        let m = big(&[&[2, -1], &[-1, 2]]);
        assert_eq!(leading_minors(&m), vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn minors_stop_at_zero_pivot() {
        let m = big(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 5]]);
        let minors = leading_minors(&m);
        assert_eq!(minors, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn inverse_needs_pivoting() {
        let m = big(&[&[0, 1], &[1, 0]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][1], BigRational::from_integer(1.into()));
        assert_eq!(inv[0][0], BigRational::from_integer(0.into()));
        assert_eq!(determinant(&m), BigInt::from(-1));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn inverse_times_matrix_is_identity() {
        let m = big(&[&[1, -1, -1, -1], &[-1, 2, 0, 0], &[-1, 0, 3, 0], &[-1, 0, 0, 7]]);
        let inv = inverse(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = BigRational::zero();
                for k in 0..4 {
                    acc += BigRational::from_integer(m[i][k].clone()) * &inv[k][j];
                }
                let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                assert_eq!(acc, expect);
            }
        }
        assert_eq!(determinant(&m), BigInt::from(1));
    }

    #[test]
    fn adjugate_of_positive_definite() {
        let (det, adj) = adjugate_i128(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(det, 3);
        assert_eq!(adj, vec![vec![2, 1], vec![1, 2]]);
        let (det, adj) = adjugate_i128(&[]).unwrap();
        assert_eq!(det, 1);
        assert!(adj.is_empty());
    }
}
