use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::CMatrix;

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// max |M - M^T|
pub(crate) fn symmetry_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.transpose())
}

/// max |M - M^dagger|
pub(crate) fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub(crate) fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.transpose()).scale(0.5)
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitian_part(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigen-decomposition `m = V diag(vals) V†`, eigenvalues ascending.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// ln det of a Hermitian positive definite matrix; `None` when some
/// eigenvalue is not positive.
pub(crate) fn ln_det_positive(m: &CMatrix) -> Option<f64> {
    let vals = hermitian_eigenvalues(m);
    if vals.first().is_some_and(|&v| v.is_nan() || v <= 0.0) {
        return None;
    }
    Some(vals.iter().map(|v| v.ln()).sum())
}

/// 2-norm condition number; infinite for singular input.
pub(crate) fn condition_number(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub(crate) fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Rows/columns of `m` selected by `rows` and `cols`, in the given order.
pub(crate) fn select(m: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
