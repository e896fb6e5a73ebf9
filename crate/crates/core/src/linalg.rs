//! Small dense real linear algebra used by the geometric kernels.
//!
//! Problem sizes here are tiny (at most d+2 ≤ 10 rows), so plain
//! Gaussian elimination with partial pivoting is both adequate and easy
//! to audit.

use crate::scalar::Float;

/// Solve `A x = b` for square `A` (consumed). Returns `None` when a pivot
/// falls below `tol`.
pub fn solve_square<S: Float>(mut a: Vec<Vec<S>>, mut b: Vec<S>, tol: S) -> Option<Vec<S>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((col, S::neg_infinity()), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if mag <= tol {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        perm.swap(col, piv);
        for r in col + 1..n {
            let factor = a[r][col] / a[col][col];
            if factor != S::zero() {
                for c in col..n {
                    let v = a[col][c];
                    a[r][c] -= factor * v;
                }
                let v = b[col];
                b[r] -= factor * v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// A nontrivial vector in the null space of the wide matrix `a`
/// (rows × cols, cols > rank). Returns `None` when elimination cannot
/// certify a free column, i.e. the system is numerically degenerate.
pub fn null_vector<S: Float>(mut a: Vec<Vec<S>>, tol: S) -> Option<Vec<S>> {
    let rows = a.len();
    if rows == 0 {
        return None;
    }
    let cols = a[0].len();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; cols];
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let (piv, mag) = (row..rows)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, S::neg_infinity()), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            });
        if mag <= tol {
            continue; // free column
        }
        a.swap(row, piv);
        // normalize then eliminate everywhere else (Gauss-Jordan)
        let inv = S::one() / a[row][col];
        for c in 0..cols {
            a[row][c] *= inv;
        }
        for r in 0..rows {
            if r != row {
                let factor = a[r][col];
                if factor != S::zero() {
                    for c in 0..cols {
                        let v = a[row][c];
                        a[r][c] -= factor * v;
                    }
                }
            }
        }
        is_pivot[col] = true;
        pivot_col_of_row.push(col);
        row += 1;
    }
    let free = (0..cols).find(|&c| !is_pivot[c])?;
    let mut v = vec![S::zero(); cols];
    v[free] = S::one();
    for (r, &pc) in pivot_col_of_row.iter().enumerate() {
        v[pc] = -a[r][free];
    }
    Some(v)
}

/// Minimum-norm solution of the underdetermined system `A z = b`
/// (rows ≤ cols, full row rank): `z = Aᵀ (A Aᵀ)⁻¹ b`.
pub fn min_norm_solution<S: Float>(a: &[Vec<S>], b: &[S], tol: S) -> Option<Vec<S>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut gram = vec![vec![S::zero(); rows]; rows];
    for i in 0..rows {
        for j in 0..rows {
            gram[i][j] = (0..cols).map(|k| a[i][k] * a[j][k]).sum();
        }
    }
    let y = solve_square(gram, b.to_vec(), tol)?;
    let mut z = vec![S::zero(); cols];
    for (i, row) in a.iter().enumerate() {
        for (k, zk) in z.iter_mut().enumerate() {
            *zk += row[k] * y[i];
        }
    }
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x: Vec<f64> = solve_square(a, vec![5.0, 10.0], 1e-12).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_system_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_square(a, vec![1.0, 2.0], 1e-12).is_none());
    }

    #[test]
    fn null_vector_annihilates() {
        // 2x4 matrix has a 2-dimensional null space.
        let a = vec![vec![1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 1.0, 1.0]];
        let v: Vec<f64> = null_vector(a.clone(), 1e-12).unwrap();
        assert!(v.iter().any(|x| x.abs() > 1e-9));
        for row in &a {
            let dot: f64 = row.iter().zip(&v).map(|(r, x)| r * x).sum();
            assert!(dot.abs() < 1e-10, "residual {dot}");
        }
    }

    #[test]
    fn min_norm_interpolates() {
        let a = vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let b = [2.0, 3.0];
        let z = min_norm_solution(&a, &b, 1e-12).unwrap();
        for (row, want) in a.iter().zip(b) {
            let got: f64 = row.iter().zip(&z).map(|(r, x)| r * x).sum();
            assert!((got - want).abs() < 1e-10);
        }
    }
}
