use super::{rank_of_values, svd_sorted, CMatrix, Tolerance, C64};
use crate::error::{Error, Result};

/// A subspace of `M_{rows,cols}` held as an orthonormal basis under the
/// trace inner product `<X, Y> = tr(Y* X)`.
///
/// The basis is stored as the columns of `frame`, each column being the
/// column-major vectorisation of one basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSubspace {
    rows: usize,
    cols: usize,
    frame: CMatrix,
}

fn vec_of(m: &CMatrix) -> &[C64] {
    m.as_slice()
}

impl MatrixSubspace {
    /// The zero subspace.
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            frame: CMatrix::zeros(rows * cols, 0),
        }
    }

    /// The whole of `M_{rows,cols}` with the matrix-unit basis.
    pub fn full(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            frame: CMatrix::identity(rows * cols, rows * cols),
        }
    }

    /// Wrap a frame whose columns are already orthonormal.
    pub(crate) fn from_orthonormal_frame(rows: usize, cols: usize, frame: CMatrix) -> Self {
        debug_assert_eq!(frame.nrows(), rows * cols);
        Self { rows, cols, frame }
    }

    /// Wrap matrices that the caller guarantees to be orthonormal.
    pub(crate) fn from_orthonormal(rows: usize, cols: usize, basis: &[CMatrix]) -> Self {
        let mut frame = CMatrix::zeros(rows * cols, basis.len());
        for (k, b) in basis.iter().enumerate() {
            frame.column_mut(k).copy_from_slice(vec_of(b));
        }
        Self { rows, cols, frame }
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn element(&self, k: usize) -> CMatrix {
        CMatrix::from_column_slice(self.rows, self.cols, self.frame.column(k).as_slice())
    }

    pub fn basis(&self) -> Vec<CMatrix> {
        (0..self.dim()).map(|k| self.element(k)).collect()
    }

    fn check_shape(&self, x: &CMatrix) -> Result<()> {
        if x.shape() != (self.rows, self.cols) {
            return Err(Error::ShapeMismatch {
                expected: (self.rows, self.cols),
                found: x.shape(),
            });
        }
        Ok(())
    }

    /// Coordinates `<X, Q_k>` of `X` against the orthonormal basis.
    pub fn coordinates(&self, x: &CMatrix) -> Result<Vec<C64>> {
        self.check_shape(x)?;
        let v = nalgebra::DVector::from_column_slice(vec_of(x));
        Ok((self.frame.adjoint() * v).iter().copied().collect())
    }

    /// Orthogonal projection of `X` onto the subspace.
    pub fn project(&self, x: &CMatrix) -> Result<CMatrix> {
        self.check_shape(x)?;
        let v = nalgebra::DVector::from_column_slice(vec_of(x));
        let p = &self.frame * (self.frame.adjoint() * v);
        Ok(CMatrix::from_column_slice(self.rows, self.cols, p.as_slice()))
    }

    /// `X - P(X)`: the component orthogonal to the subspace.
    pub fn reject(&self, x: &CMatrix) -> Result<CMatrix> {
        Ok(x - self.project(x)?)
    }

    /// Frobenius norm of the component of `X` outside the subspace.
    pub fn residual(&self, x: &CMatrix) -> Result<f64> {
        Ok(super::frobenius(&self.reject(x)?))
    }

    /// Frobenius norm of the component of `X` inside the subspace.
    pub fn component_norm(&self, x: &CMatrix) -> Result<f64> {
        Ok(super::frobenius(&self.project(x)?))
    }

    fn check_ambient(&self, other: &MatrixSubspace) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// Largest residual of an orthonormal basis element of `other` after
    /// projecting onto `self`. This is the sine of the largest principal
    /// angle from `other` into `self`.
    pub fn containment_residual(&self, other: &MatrixSubspace) -> Result<f64> {
        self.check_ambient(other)?;
        if other.dim() == 0 {
            return Ok(0.0);
        }
        let r = &other.frame - &self.frame * (self.frame.adjoint() * &other.frame);
        Ok(super::spectral_norm(&r))
    }

    /// Largest principal angle between equal-dimension subspaces; `pi/2` when
    /// the dimensions differ.
    pub fn max_principal_angle(&self, other: &MatrixSubspace) -> Result<f64> {
        self.check_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(std::f64::consts::FRAC_PI_2);
        }
        let s = self.containment_residual(other)?;
        Ok(s.min(1.0).asin())
    }

    /// All principal angles (ascending) from the cross-Gram singular values.
    pub fn principal_angles(&self, other: &MatrixSubspace) -> Result<Vec<f64>> {
        self.check_ambient(other)?;
        let g = self.frame.adjoint() * &other.frame;
        let mut angles: Vec<f64> = super::singular_values(&g)
            .into_iter()
            .map(|s| s.min(1.0).acos())
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(angles)
    }

    /// Equal dimensions and largest principal angle below `subspace_angle`.
    pub fn same_as(&self, other: &MatrixSubspace, tol: &Tolerance) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.max_principal_angle(other)? < tol.subspace_angle)
    }

    /// Every basis element of `other` lies in `self` up to `residual`.
    pub fn contains(&self, other: &MatrixSubspace, residual: f64) -> Result<bool> {
        self.check_ambient(other)?;
        for k in 0..other.dim() {
            if self.residual(&other.element(k))? >= residual {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Maximum deviation of the basis Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.frame.adjoint() * &self.frame;
        super::max_abs(&(g - CMatrix::identity(self.dim(), self.dim())))
    }
}

/// Orthonormal basis for the span of `spanning`, discarding singular values
/// below `rank_rel * sigma_max`.
pub fn orthonormalize(spanning: &[CMatrix], tol: &Tolerance) -> Result<MatrixSubspace> {
    let first = spanning.first().ok_or(Error::EmptyInput)?;
    let (rows, cols) = first.shape();
    for m in spanning {
        if m.shape() != (rows, cols) {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: m.shape(),
            });
        }
        super::ensure_finite(m)?;
    }
    if spanning.iter().all(|m| super::frobenius(m) < 1e-14) {
        return Err(Error::AllZeroInput);
    }
    let len = rows * cols;
    // Process in chunks; carrying U*Sigma keeps the singular values of the
    // columns seen so far, so the relative cutoff stays global.
    let chunk = len.max(1);
    let mut carried = CMatrix::zeros(len, 0);
    let mut last_u = CMatrix::zeros(len, 0);
    for block in spanning.chunks(chunk) {
        let mut stacked = CMatrix::zeros(len, carried.ncols() + block.len());
        stacked
            .columns_mut(0, carried.ncols())
            .copy_from(&carried);
        for (k, m) in block.iter().enumerate() {
            stacked
                .column_mut(carried.ncols() + k)
                .copy_from_slice(m.as_slice());
        }
        let (u, s, _) = svd_sorted(&stacked);
        let r = rank_of_values(&s, tol.rank_rel);
        let ur = u.columns(0, r).into_owned();
        carried = CMatrix::from_fn(len, r, |i, k| ur[(i, k)] * s[k]);
        last_u = ur;
    }
    Ok(MatrixSubspace::from_orthonormal_frame(rows, cols, last_u))
}

/// Orthogonal complement `S^perp` inside `M_n`.
pub fn perp(s: &MatrixSubspace) -> Result<MatrixSubspace> {
    let (rows, cols) = s.ambient();
    if rows != cols {
        return Err(Error::NonSquareAmbient { rows, cols });
    }
    let len = rows * cols;
    let d = s.dim();
    if d == 0 {
        return Ok(MatrixSubspace::full(rows, cols));
    }
    if d >= len {
        return Ok(MatrixSubspace::zero(rows, cols));
    }
    // Householder QR of [Q | I]: the leading d columns of the unitary factor
    // span range(Q), the trailing ones its complement.
    let mut aug = CMatrix::zeros(len, d + len);
    aug.columns_mut(0, d).copy_from(s.frame());
    aug.columns_mut(d, len).fill_with_identity();
    let q = aug.qr().q();
    let comp = q.columns(d, len - d).into_owned();
    Ok(MatrixSubspace::from_orthonormal_frame(rows, cols, comp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{diag_real, identity, matrix_unit};

    #[test]
    fn scalar_multiples_collapse() {
        let tol = Tolerance::default();
        let s = orthonormalize(&[identity(2), identity(2).scale(2.0)], &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.residual(&identity(2)).unwrap() < 1e-12);
    }

    #[test]
    fn matrix_units_are_independent() {
        let tol = Tolerance::default();
        let s = orthonormalize(
            &[matrix_unit(2, 2, 0, 1), matrix_unit(2, 2, 1, 0), identity(2)],
            &tol,
        )
        .unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn errors() {
        let tol = Tolerance::default();
        assert_eq!(orthonormalize(&[], &tol), Err(Error::EmptyInput));
        assert_eq!(
            orthonormalize(&[CMatrix::zeros(2, 2)], &tol),
            Err(Error::AllZeroInput)
        );
        assert!(matches!(
            orthonormalize(&[identity(2), identity(3)], &tol),
            Err(Error::ShapeMismatch { .. })
        ));
        let rect = orthonormalize(&[CMatrix::zeros(2, 3).add_scalar(super::super::ONE)], &tol).unwrap();
        assert!(matches!(perp(&rect), Err(Error::NonSquareAmbient { .. })));
    }

    #[test]
    fn perp_of_s2_is_diag_one_minus_one() {
        let tol = Tolerance::default();
        let s = orthonormalize(
            &[identity(2), matrix_unit(2, 2, 0, 1), matrix_unit(2, 2, 1, 0)],
            &tol,
        )
        .unwrap();
        let p = perp(&s).unwrap();
        assert_eq!(p.dim(), 1);
        let expected = orthonormalize(&[diag_real(&[1.0, -1.0])], &tol).unwrap();
        assert!(p.same_as(&expected, &tol).unwrap());
    }

    #[test]
    fn perp_of_full_is_zero() {
        let p = perp(&MatrixSubspace::full(3, 3)).unwrap();
        assert_eq!(p.dim(), 0);
    }

    #[test]
    fn chunked_orthonormalize_matches_rank() {
        let tol = Tolerance::default();
        // 20 matrices in M_2 spanning all of M_2, processed in chunks of 4
        let ms: Vec<CMatrix> = (0..20)
            .map(|k| CMatrix::from_fn(2, 2, |i, j| super::super::c(((k + 1) * (i + 2 * j + 1)) as f64 % 7.0, (k * i) as f64)))
            .collect();
        let s = orthonormalize(&ms, &tol).unwrap();
        assert_eq!(s.dim(), 4);
    }
}
