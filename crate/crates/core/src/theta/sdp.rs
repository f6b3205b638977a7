use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numkernel::{
    c, real_svd, real_symmetric_eigenvalues, require_hermitian, CMatrix,
};

type RMatrix = DMatrix<f64>;

const MAX_ITER: usize = 200;
const STEP: f64 = 0.95;
/// Iterations without a better iterate before the solver stops.
const STALL: usize = 8;

/// `maximize tr(C X)` subject to `tr(A_i X) = b_i` and `X` positive
/// semidefinite, with Hermitian `C` and `A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    n: usize,
    objective: CMatrix,
    constraints: Vec<(CMatrix, f64)>,
}

impl SdpProblem {
    pub fn new(objective: CMatrix, constraints: Vec<(CMatrix, f64)>) -> Result<Self> {
        let n = objective.nrows();
        if objective.ncols() != n {
            return Err(Error::NonSquareAmbient {
                rows: n,
                cols: objective.ncols(),
            });
        }
        let objective = require_hermitian(&objective, 1e-10)?;
        let constraints = constraints
            .into_iter()
            .map(|(a, b)| {
                if a.shape() != (n, n) {
                    return Err(Error::ShapeMismatch {
                        expected: (n, n),
                        found: a.shape(),
                    });
                }
                if !b.is_finite() {
                    return Err(Error::InvalidInput("non-finite right-hand side".into()));
                }
                Ok((require_hermitian(&a, 1e-10)?, b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            objective,
            constraints,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn objective(&self) -> &CMatrix {
        &self.objective
    }

    pub fn constraints(&self) -> &[(CMatrix, f64)] {
        &self.constraints
    }
}

/// Primal-dual pair. `y` solves the dual `minimize b.y` subject to
/// `sum y_i A_i - C` positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub x: CMatrix,
    pub y: Vec<f64>,
    pub value: f64,
    pub dual_value: f64,
    /// `|value - dual_value|`.
    pub gap: f64,
    pub iterations: usize,
    /// Largest `|tr(A_i X) - b_i|`.
    pub primal_residual: f64,
    /// Frobenius norm of the dual slack defect.
    pub dual_residual: f64,
}

/// Symmetric real matrix as its non-zero entries (both triangles).
struct Sparse(Vec<(usize, usize, f64)>);

impl Sparse {
    fn from_dense(m: &RMatrix) -> Self {
        let mut e = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != 0.0 {
                    e.push((i, j, m[(i, j)]));
                }
            }
        }
        Sparse(e)
    }

    fn dot(&self, x: &RMatrix) -> f64 {
        self.0.iter().map(|&(i, j, v)| v * x[(i, j)]).sum()
    }

    fn add_to(&self, out: &mut RMatrix, scale: f64) {
        for &(i, j, v) in &self.0 {
            out[(i, j)] += scale * v;
        }
    }

    fn norm(&self) -> f64 {
        self.0.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt()
    }

    /// `W A W`.
    fn sandwich(&self, w: &RMatrix) -> RMatrix {
        let n = w.nrows();
        let mut out = RMatrix::zeros(n, n);
        for &(p, q, v) in &self.0 {
            let wp = w.column(p);
            let wq = w.column(q);
            // out += v * w[:, p] w[q, :]
            out.ger(v, &wp, &wq, 1.0);
        }
        out
    }
}

/// Real form of the problem, in minimisation form `min <C, X>`.
struct RealProblem {
    c: RMatrix,
    a: Vec<Sparse>,
    b: DVector<f64>,
    complex: bool,
}

fn realify(p: &SdpProblem) -> RealProblem {
    let complex = std::iter::once(&p.objective)
        .chain(p.constraints.iter().map(|(a, _)| a))
        .any(|m| m.iter().any(|z| z.im != 0.0));
    let n = p.n;
    let embed = |m: &CMatrix| -> RMatrix {
        if complex {
            RMatrix::from_fn(2 * n, 2 * n, |i, j| {
                let z = m[(i % n, j % n)];
                let v = match (i < n, j < n) {
                    (true, true) | (false, false) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                };
                v / 2.0
            })
        } else {
            m.map(|z| z.re)
        }
    };
    RealProblem {
        c: -embed(&p.objective),
        a: p
            .constraints
            .iter()
            .map(|(a, _)| Sparse::from_dense(&embed(a)))
            .collect(),
        b: DVector::from_iterator(p.constraints.len(), p.constraints.iter().map(|x| x.1)),
        complex,
    }
}

fn inner(x: &RMatrix, y: &RMatrix) -> f64 {
    x.dot(y)
}

fn symmetrize(m: &RMatrix) -> RMatrix {
    (m + m.transpose()) * 0.5
}

fn chol(m: &RMatrix) -> Result<RMatrix> {
    m.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::NumericalBreakdown("iterate lost positive definiteness".into()))
}

/// Largest step `a` with `X + a dX` positive semidefinite (infinite if any).
fn max_step(l: &RMatrix, dx: &RMatrix) -> f64 {
    let li = match l.clone().solve_lower_triangular(&RMatrix::identity(l.nrows(), l.nrows())) {
        Some(li) => li,
        None => return 0.0,
    };
    let s = symmetrize(&(&li * dx * li.transpose()));
    let lmin = real_symmetric_eigenvalues(&s).min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

/// Nesterov-Todd scaling point `W` with `W Z W = X`.
fn nt_scaling(lx: &RMatrix, lz: &RMatrix) -> Result<RMatrix> {
    let (_, sigma, v) = real_svd(&(lz.transpose() * lx));
    let mut g = lx * v;
    for (j, s) in sigma.iter().enumerate() {
        if *s <= 0.0 {
            return Err(Error::NumericalBreakdown("degenerate scaling".into()));
        }
        g.column_mut(j).scale_mut(1.0 / s.sqrt());
    }
    Ok(&g * g.transpose())
}

/// Infeasible-start primal-dual interior-point method with Nesterov-Todd
/// scaling and a Mehrotra-style centring choice. Hermitian data are handled
/// through the usual real `2n x 2n` embedding when any entry is complex.
pub fn sdp_solve(p: &SdpProblem) -> Result<SdpSolution> {
    let rp_ = realify(p);
    let (c_mat, a, b) = (&rp_.c, &rp_.a, &rp_.b);
    let nn = c_mat.nrows();
    let m = a.len();
    let nf = nn as f64;

    let a_norm_max = a.iter().map(Sparse::norm).fold(0.0, f64::max);
    let xi = a
        .iter()
        .zip(b.iter())
        .map(|(ai, bi)| nf * (1.0 + bi.abs()) / (1.0 + ai.norm()))
        .fold(10f64.max(nf.sqrt()), f64::max);
    let eta = 10f64
        .max(nf.sqrt())
        .max((1.0 + c_mat.norm().max(a_norm_max)) / nf.sqrt());
    let mut x = RMatrix::identity(nn, nn) * xi;
    let mut z = RMatrix::identity(nn, nn) * eta;
    let mut y = DVector::zeros(m);
    let b_norm = b.norm();
    let c_norm = c_mat.norm();

    let a_t = |v: &DVector<f64>| -> RMatrix {
        let mut out = RMatrix::zeros(nn, nn);
        for (ai, vi) in a.iter().zip(v.iter()) {
            ai.add_to(&mut out, *vi);
        }
        out
    };
    let a_op = |xm: &RMatrix| -> DVector<f64> {
        DVector::from_iterator(m, a.iter().map(|ai| ai.dot(xm)))
    };

    let mut iterations = 0;
    let mut converged = false;
    // near a degenerate optimum the Schur system loses accuracy and the
    // iterates drift; the best iterate seen is what gets reported then
    let mut best = (f64::INFINITY, x.clone(), y.clone(), z.clone());
    let mut stale = 0;
    while iterations < MAX_ITER {
        let rp = b - a_op(&x);
        let rd = c_mat - &z - a_t(&y);
        let pobj = inner(c_mat, &x);
        let dobj = b.dot(&y);
        let scale = 1.0 + pobj.abs() + dobj.abs();
        let pinf = rp.norm() / (1.0 + b_norm);
        let dinf = rd.norm() / (1.0 + c_norm);
        let compl = inner(&x, &z);
        if pinf < 1e-10 && dinf < 1e-10 && (pobj - dobj).abs() / scale < 1e-10 && compl / scale < 1e-10
        {
            converged = true;
            break;
        }
        if !(pobj.is_finite() && dobj.is_finite()) {
            return Err(Error::NumericalBreakdown("non-finite objective".into()));
        }
        let merit = pinf.max(dinf).max((pobj - dobj).abs() / scale).max(compl / scale);
        if merit < best.0 {
            best = (merit, x.clone(), y.clone(), z.clone());
            stale = 0;
        } else {
            stale += 1;
            if stale >= STALL {
                break;
            }
        }
        iterations += 1;

        let (Ok(lx), Ok(lz)) = (chol(&x), chol(&z)) else {
            break;
        };
        let Ok(w) = nt_scaling(&lx, &lz) else {
            break;
        };
        let waw: Vec<RMatrix> = a.iter().map(|ai| ai.sandwich(&w)).collect();
        let schur = RMatrix::from_fn(m, m, |i, j| a[i].dot(&waw[j]));
        let schur = symmetrize(&schur);
        let schur_chol = match schur.clone().cholesky() {
            Some(ch) => ch,
            None => {
                let bump = 1e-13 * schur.diagonal().max().max(1.0);
                match (&schur + RMatrix::identity(m, m) * bump).cholesky() {
                    Some(ch) => ch,
                    None => break,
                }
            }
        };
        let Some(z_inv) = lz
            .clone()
            .solve_lower_triangular(&RMatrix::identity(nn, nn))
            .map(|li| li.transpose() * li)
        else {
            break;
        };
        let wrdw = &w * &rd * &w;
        let a_wrdw = a_op(&wrdw);
        let mu = compl / nf;

        let direction = |sigma: f64| -> (RMatrix, DVector<f64>, RMatrix) {
            let rc = &z_inv * (sigma * mu) - &x;
            let rhs = &rp - a_op(&rc) + &a_wrdw;
            let mut dy = schur_chol.solve(&rhs);
            // one round of iterative refinement
            dy += schur_chol.solve(&(&rhs - &schur * &dy));
            let dz = &rd - a_t(&dy);
            let dx = symmetrize(&(rc - &w * &dz * &w));
            (dx, dy, dz)
        };

        let (dx_a, _, dz_a) = direction(0.0);
        let ap = max_step(&lx, &dx_a).min(1.0);
        let ad = max_step(&lz, &dz_a).min(1.0);
        let mu_aff = inner(&(&x + &dx_a * ap), &(&z + &dz_a * ad)) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let (dx, dy, dz) = direction(sigma);
        let ap = (STEP * max_step(&lx, &dx)).min(1.0);
        let ad = (STEP * max_step(&lz, &dz)).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            break;
        }
        x += &dx * ap;
        x = symmetrize(&x);
        y += &dy * ad;
        z += &dz * ad;
        z = symmetrize(&z);
    }
    if !converged {
        (_, x, y, z) = best;
    }

    let xc = if rp_.complex {
        let n = p.n;
        CMatrix::from_fn(n, n, |i, j| {
            c(
                (x[(i, j)] + x[(i + n, j + n)]) / 2.0,
                (x[(i + n, j)] - x[(i, j + n)]) / 2.0,
            )
        })
    } else {
        x.map(|v| c(v, 0.0))
    };
    let value = crate::numkernel::hs_inner(&xc, &p.objective).re;
    let y_out: Vec<f64> = y.iter().map(|v| -v).collect();
    let dual_value: f64 = p.constraints.iter().zip(&y_out).map(|((_, bi), yi)| bi * yi).sum();
    let primal_residual = p
        .constraints
        .iter()
        .map(|(ai, bi)| (crate::numkernel::hs_inner(&xc, ai).re - bi).abs())
        .fold(0.0, f64::max);
    let dual_residual = (c_mat - &z - a_t(&y)).norm();
    let gap = (value - dual_value).abs();
    let acceptable = primal_residual < 1e-7 && gap < 1e-6 * (1.0 + value.abs());
    if !converged && !acceptable {
        return Err(Error::MaxIterations { iterations, gap });
    }
    Ok(SdpSolution {
        x: xc,
        y: y_out,
        value,
        dual_value,
        gap,
        iterations,
        primal_residual,
        dual_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{from_real, identity, is_psd, Tolerance};

    #[test]
    fn trace_one() {
        let p = SdpProblem::new(identity(3), vec![(identity(3), 1.0)]).unwrap();
        let s = sdp_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-7);
        assert!(s.gap < 1e-6);
    }

    #[test]
    fn complex_objective() {
        // largest eigenvalue of [[0, i], [-i, 0]] is 1
        let cm = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]);
        let p = SdpProblem::new(cm, vec![(identity(2), 1.0)]).unwrap();
        let s = sdp_solve(&p).unwrap();
        assert!((s.value - 1.0).abs() < 1e-7, "{}", s.value);
        assert!(is_psd(&s.x, &Tolerance::default()).unwrap().is_psd);
        assert!(s.x[(0, 1)].im.abs() > 0.4);
    }

    #[test]
    fn weak_duality_and_residuals() {
        let cm = from_real(3, 3, &[1.0, 2.0, 0.0, 2.0, -1.0, 1.0, 0.0, 1.0, 0.5]);
        let a1 = identity(3);
        let a2 = from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        let p = SdpProblem::new(cm, vec![(a1, 1.0), (a2, 0.2)]).unwrap();
        let s = sdp_solve(&p).unwrap();
        assert!(s.value <= s.dual_value + s.gap + 1e-12);
        assert!(s.primal_residual < 1e-7);
        assert!(s.gap < 1e-6 * (1.0 + s.value.abs()));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            SdpProblem::new(bad, vec![]),
            Err(Error::NotHermitian { .. })
        ));
    }
}
