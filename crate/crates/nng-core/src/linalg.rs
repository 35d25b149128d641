//! Small dense solver used for stationary distributions of desk-scale chains.

use alloc::vec;
use alloc::vec::Vec;

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` for (numerically) singular systems.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite entries")
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Stationary vector of a dense row-stochastic matrix: solves `pi T = pi`
/// with the normalization `sum pi = 1`.
pub(crate) fn stationary_dense(t: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = t.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[j][i] = t[i][j];
        }
        a[i][i] -= 1.0;
    }
    for j in 0..n {
        a[n - 1][j] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let mut pi = solve(a, b)?;
    // clip tiny negative round-off and renormalize
    let mut total = 0.0;
    for p in pi.iter_mut() {
        if *p < 0.0 {
            *p = 0.0;
        }
        total += *p;
    }
    if total <= 0.0 {
        return None;
    }
    for p in pi.iter_mut() {
        *p /= total;
    }
    Some(pi)
}
