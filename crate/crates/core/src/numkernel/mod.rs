//! Dense complex linear algebra with an explicit tolerance policy.
//!
//! Every decision that depends on a numerical threshold (rank, positivity,
//! subspace equality) goes through a [`Tolerance`]. Rank cutoffs are relative
//! to the largest singular value. Matrices are nalgebra types; the SVD and
//! the Hermitian eigensolver are faer's.

mod dense;
mod json;
mod subspace;

pub use dense::{real_svd, real_symmetric_eigenvalues};
pub use json::MatrixJson;
pub use subspace::{orthonormalize, perp, MatrixSubspace};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    /// Singular values below `rank_rel * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Eigenvalues above `-psd_abs * (1 + |M|)` count as non-negative.
    pub psd_abs: f64,
    /// Largest principal angle (radians) at which two subspaces are equal.
    pub subspace_angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: 1e-8,
            psd_abs: 1e-8,
            subspace_angle: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, psd_abs: f64, subspace_angle: f64) -> Result<Self> {
        let tol = Self {
            rank_rel,
            psd_abs,
            subspace_angle,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// All three thresholds set to the same value.
    pub fn uniform(value: f64) -> Result<Self> {
        Self::new(value, value, value)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel", self.rank_rel),
            ("psd_abs", self.psd_abs),
            ("subspace_angle", self.subspace_angle),
        ] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} = {v} must lie in (0, 1e-2)"
                )));
            }
        }
        Ok(())
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix unit `E_{ij}` in `M_{rows,cols}` (0-indexed).
pub fn matrix_unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut m = zeros(rows, cols);
    m[(i, j)] = ONE;
    m
}

pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> CMatrix {
    assert_eq!(row_major.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(row_major[i * cols + j], 0.0))
}

pub fn diag(values: &[C64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let v: Vec<C64> = values.iter().map(|&x| c(x, 0.0)).collect();
    diag(&v)
}

/// Hilbert-Schmidt inner product `<X, Y> = tr(Y* X)`.
pub fn hs_inner(x: &CMatrix, y: &CMatrix) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| b.conj() * a).sum()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise deviation `max |M - M*|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

/// Hermitian within `1e-12 * (1 + max |M|)`.
pub fn is_hermitian(m: &CMatrix) -> bool {
    hermitian_deviation(m) <= 1e-12 * (1.0 + max_abs(m))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    dense::complex_singular_values(m)
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Count of singular values above `rank_rel * sigma_max`; 0 for the zero matrix.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerance) -> usize {
    rank_of_values(&singular_values(m), tol.rank_rel)
}

pub(crate) fn rank_of_values(sorted_desc: &[f64], rel: f64) -> usize {
    let smax = match sorted_desc.first() {
        Some(&s) if s > f64::MIN_POSITIVE => s,
        _ => return 0,
    };
    sorted_desc.iter().filter(|&&s| s > rel * smax).count()
}

/// Thin SVD with singular triplets sorted in descending order:
/// `(U, sigma, V)` with `M = U diag(sigma) V*`.
pub fn svd_sorted(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    if m.nrows() == 0 || m.ncols() == 0 {
        let k = 0;
        return (zeros(m.nrows(), k), Vec::new(), zeros(m.ncols(), k));
    }
    dense::complex_svd(m)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    dense::complex_hermitian_eigen(&hermitian_part(m))
}

/// Outcome of a positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_abs_eigenvalue: f64,
}

/// `true` iff `lambda_min(M) >= -psd_abs * (1 + lambda_max(|M|))`.
pub fn is_psd(m: &CMatrix, tol: &Tolerance) -> Result<PsdReport> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (m.nrows(), m.nrows()),
            found: (m.nrows(), m.ncols()),
        });
    }
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * (1.0 + max_abs(m)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (values, _) = hermitian_eigen(m);
    let min = values.first().copied().unwrap_or(0.0);
    let max_abs_ev = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(PsdReport {
        is_psd: min >= -tol.psd_abs * (1.0 + max_abs_ev),
        min_eigenvalue: min,
        max_abs_eigenvalue: max_abs_ev,
    })
}

pub fn largest_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.last().copied().unwrap_or(0.0)
}

/// Factor a PSD matrix as `M = X* X` with `X` of shape `rank x n`,
/// discarding eigenvalues below the relative rank threshold.
pub fn psd_factor(m: &CMatrix, tol: &Tolerance) -> CMatrix {
    let n = m.nrows();
    let (values, vectors) = hermitian_eigen(m);
    let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let keep: Vec<usize> = (0..n)
        .rev()
        .filter(|&i| top > 0.0 && values[i] > tol.rank_rel * top)
        .collect();
    CMatrix::from_fn(keep.len(), n, |r, col| {
        let i = keep[r];
        vectors[(col, i)].conj() * values[i].sqrt()
    })
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped).
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let d: Vec<C64> = values.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)).collect();
    &vectors * diag(&d) * vectors.adjoint()
}

/// Inverse square root of a positive definite matrix.
pub fn pd_inv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m);
    if values.first().is_some_and(|&v| v <= 0.0) {
        return Err(Error::NumericalBreakdown(
            "matrix is not positive definite".into(),
        ));
    }
    let d: Vec<C64> = values.iter().map(|&v| c(1.0 / v.sqrt(), 0.0)).collect();
    Ok(&vectors * diag(&d) * vectors.adjoint())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block-diagonal `A (+) B`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = b.shape();
    let mut m = zeros(r1 + r2, c1 + c2);
    m.view_mut((0, 0), (r1, c1)).copy_from(a);
    m.view_mut((r1, c1), (r2, c2)).copy_from(b);
    m
}

/// `max |U*U - I|` entrywise.
pub fn isometry_deviation(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.ncols())))
}

/// Orthogonal projection check: `max(|P^2 - P|, |P - P*|)`.
pub fn projection_deviation(p: &CMatrix) -> f64 {
    if !p.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(p * p - p)).max(hermitian_deviation(p))
}

/// Orthogonal projection onto the column space of `x`.
pub fn range_projection(x: &CMatrix, tol: &Tolerance) -> CMatrix {
    let basis = range_basis(x, tol);
    &basis * basis.adjoint()
}

/// Orthonormal basis (as columns) of the column space of `x`.
pub fn range_basis(x: &CMatrix, tol: &Tolerance) -> CMatrix {
    if x.ncols() == 0 || x.nrows() == 0 {
        return zeros(x.nrows(), 0);
    }
    let (u, s, _) = svd_sorted(x);
    let r = rank_of_values(&s, tol.rank_rel);
    u.columns(0, r).into_owned()
}

/// Hermitian part; reports how far `m` was from Hermitian.
pub fn require_hermitian(m: &CMatrix, slack: f64) -> Result<CMatrix> {
    let dev = hermitian_deviation(m);
    if dev > slack * (1.0 + max_abs(m)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(hermitian_part(m))
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix contains NaN or Inf".into()))
    }
}
