//! Operator systems: unital, adjoint-closed subspaces of `M_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numkernel::{
    c, frobenius, identity, isometry_deviation, kron, matrix_unit, orthonormalize, perp,
    projection_deviation, range_basis, CMatrix, MatrixJson, MatrixSubspace, Tolerance,
};

/// Residual allowed when checking unitality and adjoint closure.
const SYSTEM_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSystem {
    n: usize,
    space: MatrixSubspace,
}

impl OperatorSystem {
    /// Wrap a subspace after checking that it contains `I` and is closed
    /// under adjoints.
    pub fn from_subspace(space: MatrixSubspace) -> Result<Self> {
        let (rows, cols) = space.ambient();
        if rows != cols {
            return Err(Error::NonSquareAmbient { rows, cols });
        }
        let s = Self { n: rows, space };
        let (unit, adj) = s.invariant_residuals();
        if unit >= SYSTEM_SLACK || adj >= SYSTEM_SLACK {
            return Err(Error::InvalidInput(format!(
                "not an operator system: identity residual {unit:.2e}, adjoint residual {adj:.2e}"
            )));
        }
        Ok(s)
    }

    pub(crate) fn from_subspace_unchecked(space: MatrixSubspace) -> Self {
        let n = space.ambient().0;
        Self { n, space }
    }

    /// `(distance of I_n from S / sqrt(n), max adjoint residual of a basis element)`.
    pub fn invariant_residuals(&self) -> (f64, f64) {
        let id = identity(self.n);
        let unit = self.space.residual(&id).unwrap_or(f64::INFINITY) / (self.n as f64).sqrt();
        let adj = self
            .space
            .basis()
            .iter()
            .map(|b| self.space.residual(&b.adjoint()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        (unit, adj)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &MatrixSubspace {
        &self.space
    }

    pub fn basis(&self) -> Vec<CMatrix> {
        self.space.basis()
    }

    pub fn perp(&self) -> MatrixSubspace {
        perp(&self.space).expect("operator systems have square ambient")
    }

    /// Frobenius distance of `x` from the system.
    pub fn residual(&self, x: &CMatrix) -> Result<f64> {
        self.space.residual(x)
    }

    /// Frobenius norm of the component of `x` inside the system; zero iff `x` lies in the perp.
    pub fn perp_residual(&self, x: &CMatrix) -> Result<f64> {
        self.space.component_norm(x)
    }

    pub fn contains_matrix(&self, x: &CMatrix) -> Result<bool> {
        Ok(self.residual(x)? < SYSTEM_SLACK * (1.0 + frobenius(x)))
    }

    fn check_same_n(&self, other: &OperatorSystem) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Same dimension and largest principal angle below `subspace_angle`.
    pub fn equals(&self, other: &OperatorSystem, tol: &Tolerance) -> Result<bool> {
        self.check_same_n(other)?;
        self.space.same_as(&other.space, tol)
    }

    /// Every basis element of `other` lies in `self` up to `1e-8`.
    pub fn contains(&self, other: &OperatorSystem) -> Result<bool> {
        self.check_same_n(other)?;
        self.space.contains(&other.space, SYSTEM_SLACK)
    }

    pub fn max_principal_angle(&self, other: &OperatorSystem) -> Result<f64> {
        self.check_same_n(other)?;
        self.space.max_principal_angle(&other.space)
    }
}

/// The smallest operator system containing `spanning`: adjoints and `I_n`
/// are adjoined before orthonormalising.
pub fn make_operator_system(
    n: usize,
    spanning: &[CMatrix],
    tol: &Tolerance,
) -> Result<OperatorSystem> {
    let mut all = Vec::with_capacity(2 * spanning.len() + 1);
    all.push(identity(n));
    for m in spanning {
        if m.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                found: m.shape(),
            });
        }
        all.push(m.clone());
        all.push(m.adjoint());
    }
    Ok(OperatorSystem::from_subspace_unchecked(orthonormalize(
        &all, tol,
    )?))
}

/// `S_G = span{E_ij : i = j or i ~ j}`.
pub fn graph_system(g: &Graph) -> OperatorSystem {
    let n = g.n();
    let units: Vec<CMatrix> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .filter(|&(i, j)| g.adjacent_or_equal(i, j))
        .map(|(i, j)| matrix_unit(n, n, i, j))
        .collect();
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::from_orthonormal(n, n, &units))
}

pub fn full_system(n: usize) -> OperatorSystem {
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::full(n, n))
}

/// `C I_n`.
pub fn scalar_system(n: usize) -> OperatorSystem {
    let unit = identity(n).unscale((n as f64).sqrt());
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::from_orthonormal(n, n, &[unit]))
}

/// `S_k`: matrices in `M_k` with constant diagonal.
pub fn sk_system(k: usize) -> OperatorSystem {
    let mut basis = vec![identity(k).unscale((k as f64).sqrt())];
    for j in 0..k {
        for i in 0..k {
            if i != j {
                basis.push(matrix_unit(k, k, i, j));
            }
        }
    }
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::from_orthonormal(k, k, &basis))
}

/// Spanned by Kronecker products of the two bases (already orthonormal).
pub fn tensor(s1: &OperatorSystem, s2: &OperatorSystem) -> OperatorSystem {
    let b1 = s1.basis();
    let b2 = s2.basis();
    let mut basis = Vec::with_capacity(b1.len() * b2.len());
    for a in &b1 {
        for b in &b2 {
            basis.push(kron(a, b));
        }
    }
    let n = s1.n * s2.n;
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::from_orthonormal(n, n, &basis))
}

/// `{A (+) B : A in S1, B in S2}` inside `M_{n1 + n2}`.
pub fn oplus(s1: &OperatorSystem, s2: &OperatorSystem) -> OperatorSystem {
    let (n1, n2) = (s1.n, s2.n);
    let n = n1 + n2;
    let mut basis = Vec::with_capacity(s1.dim() + s2.dim());
    for a in s1.basis() {
        let mut m = CMatrix::zeros(n, n);
        m.view_mut((0, 0), (n1, n1)).copy_from(&a);
        basis.push(m);
    }
    for b in s2.basis() {
        let mut m = CMatrix::zeros(n, n);
        m.view_mut((n1, n1), (n2, n2)).copy_from(&b);
        basis.push(m);
    }
    OperatorSystem::from_subspace_unchecked(MatrixSubspace::from_orthonormal(n, n, &basis))
}

/// `P S P` restricted to `range(P)`, identified with `C^r` via an orthonormal basis.
pub fn compress(s: &OperatorSystem, p: &CMatrix, tol: &Tolerance) -> Result<OperatorSystem> {
    if p.shape() != (s.n, s.n) {
        return Err(Error::ShapeMismatch {
            expected: (s.n, s.n),
            found: p.shape(),
        });
    }
    let dev = projection_deviation(p);
    if dev > 1e-10 {
        return Err(Error::NotProjection { deviation: dev });
    }
    let v = range_basis(p, tol);
    if v.ncols() == 0 {
        return Err(Error::ZeroProjection { index: 0 });
    }
    let images: Vec<CMatrix> = s.basis().iter().map(|b| v.adjoint() * b * &v).collect();
    make_operator_system(v.ncols(), &images, tol)
}

/// `U* S U` for a unitary `U`.
pub fn conjugate(s: &OperatorSystem, u: &CMatrix) -> Result<OperatorSystem> {
    if u.shape() != (s.n, s.n) {
        return Err(Error::ShapeMismatch {
            expected: (s.n, s.n),
            found: u.shape(),
        });
    }
    let dev = isometry_deviation(u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let basis: Vec<CMatrix> = s.basis().iter().map(|b| u.adjoint() * b * u).collect();
    Ok(OperatorSystem::from_subspace_unchecked(
        MatrixSubspace::from_orthonormal(s.n, s.n, &basis),
    ))
}

/// Wire format: `{"n": int, "basis": [matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSystemJson {
    pub n: usize,
    pub basis: Vec<MatrixJson>,
}

impl From<&OperatorSystem> for OperatorSystemJson {
    fn from(s: &OperatorSystem) -> Self {
        Self {
            n: s.n,
            basis: s.basis().iter().map(MatrixJson::from_matrix).collect(),
        }
    }
}

impl OperatorSystemJson {
    /// The operator system generated by the listed matrices.
    pub fn to_system(&self, tol: &Tolerance) -> Result<OperatorSystem> {
        let mats = self
            .basis
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        make_operator_system(self.n, &mats, tol)
    }
}

/// `diag(1, -1)`-type traceless diagonal matrices span `S_k^perp`; this
/// returns `diag(k - 1, -1, ..., -1)`, which makes `I + K` positive.
pub fn sk_theta_direction(k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(k, k);
    m[(0, 0)] = c(k as f64 - 1.0, 0.0);
    for i in 1..k {
        m[(i, i)] = c(-1.0, 0.0);
    }
    m
}
