use nalgebra::DMatrix;

use super::Vector;

/// Numerical rank of the matrix whose rows are `rows`; singular values at or
/// below `tol * max(1, sigma_max)` count as zero.
pub fn matrix_rank(rows: &[&[f64]], tol: f64) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let cols = first.len();
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let scale = sv.iter().copied().fold(1.0_f64, f64::max);
    sv.iter().filter(|&&s| s > tol * scale).count()
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[&Vector], tol: f64) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vector> = rest.iter().map(|p| *p - *first).collect();
    let rows: Vec<&[f64]> = diffs.iter().map(|d| d.coords()).collect();
    matrix_rank(&rows, tol)
}

/// Solves `a x = b` for a square `n x n` row-major `a` by Gaussian
/// elimination with partial pivoting. `b` is overwritten with `x`; `a` is
/// destroyed. Returns `false` when a pivot vanishes.
pub fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return false;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            b[row] -= factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in row + 1..n {
            acc -= a[row * n + j] * b[j];
        }
        b[row] = acc / a[row * n + row];
    }
    true
}
