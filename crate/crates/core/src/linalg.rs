//! Dense exact linear algebra over the rationals.
//!
//! Matrices are row lists. Everything is Gauss-Jordan elimination with
//! exact pivots; there is no scaling heuristic to tune because arithmetic
//! is never approximate. Sizes stay small (rows and columns bounded by the
//! number of vertex pairs and the ambient dimension), so dense is fine.

use crate::rational::Rational;
use num::Zero;

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// together with the pivot column of each remaining row, in increasing
/// column order. The output is canonical for the row space.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.iter().map(|r| r.len()).max().unwrap_or(0);
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(src) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, src);
        let inv = m[row][col].recip();
        for x in &mut m[row] {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

/// Rank of the row list.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).0.len()
}

/// Canonical basis of the right kernel `{x : M x = 0}` of a matrix with
/// `ncols` columns, derived from the reduced echelon form: one vector per
/// free column, carrying 1 there and the negated pivot-row entries above.
/// An empty row list yields the standard basis.
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = rref(rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = num::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Matrix-vector product.
pub fn mat_vec(rows: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    rows.iter().map(|r| crate::rational::dot(r, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_hand_matrices() {
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
        // The three pairwise differences of collinear points.
        assert_eq!(rank(&m(&[&[1, 0], &[2, 0], &[1, 0]])), 1);
    }

    #[test]
    fn rref_normalizes_rows() {
        let (r, p) = rref(&m(&[&[2, 4, 6], &[1, 2, 4]]));
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r[0], vec![rat(1), rat(2), rat(0)]);
        assert_eq!(r[1], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn rref_handles_fractions() {
        let rows = vec![vec![ratio(1, 2), ratio(1, 3)]];
        let (r, p) = rref(&rows);
        assert_eq!(p, vec![0]);
        assert_eq!(r[0], vec![rat(1), ratio(2, 3)]);
    }

    #[test]
    fn kernel_of_full_rank_map_is_trivial() {
        assert!(kernel_basis(&m(&[&[1, 0], &[0, 1]]), 2).is_empty());
    }

    #[test]
    fn kernel_of_empty_system_is_standard_basis() {
        let b = kernel_basis(&[], 3);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], vec![rat(1), rat(0), rat(0)]);
        assert_eq!(b[2], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let rows = m(&[&[1, -1, 0], &[2, 0, -2]]);
        let basis = kernel_basis(&rows, 3);
        assert_eq!(basis.len(), 1);
        for v in &basis {
            for y in mat_vec(&rows, v) {
                assert_eq!(y, rat(0));
            }
        }
        // Rank-nullity on the same system.
        assert_eq!(rank(&rows) + basis.len(), 3);
    }

    #[test]
    fn kernel_of_line_normals_is_orthogonal_axis() {
        // Differences of points on the x-axis span only that axis.
        let rows = m(&[&[1, 0], &[2, 0]]);
        let basis = kernel_basis(&rows, 2);
        assert_eq!(basis, vec![vec![rat(0), rat(1)]]);
    }
}
