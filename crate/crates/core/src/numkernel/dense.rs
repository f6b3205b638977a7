//! SVD and Hermitian eigendecomposition, computed by faer on copies of the
//! nalgebra matrices.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use super::CMatrix;

fn to_faer<T: Copy>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn descending(s: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    order
}

/// Thin SVD `(U, sigma, V)` of a complex matrix, sorted descending.
pub(crate) fn complex_svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let f = to_faer(m);
    let svd = f.thin_svd().expect("SVD converges for finite input");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let raw: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    let order = descending(&raw);
    let sigma = order.iter().map(|&i| raw[i]).collect();
    let u = CMatrix::from_fn(m.nrows(), order.len(), |r, k| u[(r, order[k])]);
    let v = CMatrix::from_fn(m.ncols(), order.len(), |r, k| v[(r, order[k])]);
    (u, sigma, v)
}

pub(crate) fn complex_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s = to_faer(m)
        .singular_values()
        .expect("SVD converges for finite input");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues ascending with matching eigenvector columns; only the lower
/// triangle of `m` is read.
pub(crate) fn complex_hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let f = to_faer(m);
    let eig = f
        .self_adjoint_eigen(Side::Lower)
        .expect("eigensolver converges for finite input");
    let (u, s) = (eig.U(), eig.S().column_vector());
    let raw: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let values = order.iter().map(|&i| raw[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, k| u[(r, order[k])]);
    (values, vectors)
}

/// Thin SVD of a real matrix, sorted descending: `(U, sigma, V)`.
pub fn real_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let f = to_faer(m);
    let svd = f.thin_svd().expect("SVD converges for finite input");
    let (u, v, s) = (svd.U(), svd.V(), svd.S().column_vector());
    let raw: Vec<f64> = (0..s.nrows()).map(|i| s[i]).collect();
    let order = descending(&raw);
    let sigma = order.iter().map(|&i| raw[i]).collect();
    let u = DMatrix::from_fn(m.nrows(), order.len(), |r, k| u[(r, order[k])]);
    let v = DMatrix::from_fn(m.ncols(), order.len(), |r, k| v[(r, order[k])]);
    (u, sigma, v)
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn real_symmetric_eigenvalues(m: &DMatrix<f64>) -> DVector<f64> {
    let mut ev = to_faer(m)
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("eigensolver converges for finite input");
    ev.sort_by(f64::total_cmp);
    DVector::from_vec(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{c, max_abs};

    #[test]
    fn svd_reconstructs_rank_deficient_stack() {
        // columns with a rank-five span and entries down to 1e-17; the
        // stacked Kraus products of a sign-averaging channel look like this
        let m = CMatrix::from_fn(25, 25, |i, j| {
            let v = ((i * 7 + j * 3) % 5) as f64 * 0.05 + if (i + j) % 11 == 0 { 1e-17 } else { 0.0 };
            c(v * ((j % 5) as f64 + 1.0), 0.0)
        });
        let (u, s, v) = complex_svd(&m);
        let d = CMatrix::from_diagonal(&DVector::from_iterator(s.len(), s.iter().map(|&x| c(x, 0.0))));
        assert!(max_abs(&(&u * d * v.adjoint() - &m)) < 1e-13);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_ascending() {
        let m = CMatrix::from_fn(3, 3, |i, j| if i == j { c(3.0 - i as f64, 0.0) } else { c(0.0, 0.0) });
        let (ev, u) = complex_hermitian_eigen(&m);
        assert_eq!(ev, vec![1.0, 2.0, 3.0]);
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(3, 3))) < 1e-14);
    }
}
