use rand::Rng;
use rand_distr::StandardNormal;

use super::verify::{
    iota_certificate, qinter_certificate, verify_beta_certificate, verify_gamma_certificate,
    verify_independent_set, verify_noncancelling,
};
use super::ParamCertificate;
use crate::channels::{ProjectionTuple, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::{Graph, VectorTuple};
use crate::numkernel::{
    c, identity, pd_inv_sqrt, perp, range_basis, singular_values, CMatrix, MatrixSubspace,
    Tolerance, C64,
};
use crate::optim::{minimize, LbfgsConfig};
use crate::opsys::OperatorSystem;
use crate::par::{first_success, Exec};
use crate::random::rng_from_seed;

/// How hard a multi-start search tries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    /// Independent random starts; the lowest successful start wins.
    pub starts: usize,
    /// L-BFGS iterations per start.
    pub max_iter: usize,
    pub exec: Exec,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iter: 2000,
            exec: Exec::default(),
        }
    }
}

impl SearchBudget {
    pub fn new(starts: usize, max_iter: usize) -> Self {
        Self {
            starts,
            max_iter,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// Result of a witness search. `NotFound` is never a proof of absence; it
/// records the effort spent.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Found(ParamCertificate),
    NotFound { starts: usize, max_iter: usize },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&ParamCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn into_certificate(self) -> Option<ParamCertificate> {
        match self {
            SearchOutcome::Found(c) => Some(c),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    fn not_found(budget: &SearchBudget) -> Self {
        SearchOutcome::NotFound {
            starts: budget.starts,
            max_iter: budget.max_iter,
        }
    }
}

/// Seed of start `i` derived from the caller's seed.
pub(crate) fn start_seed(seed: u64, start: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(start as u64)
}

fn lbfgs(budget: &SearchBudget) -> LbfgsConfig {
    LbfgsConfig {
        max_iter: budget.max_iter,
        f_target: 1e-24,
        ..Default::default()
    }
}

/// Complex matrices packed as interleaved `(re, im)` pairs, column-major.
struct Layout {
    shapes: Vec<(usize, usize)>,
}

impl Layout {
    fn len(&self) -> usize {
        self.shapes.iter().map(|(r, c)| 2 * r * c).sum()
    }

    fn unpack(&self, x: &[f64]) -> Vec<CMatrix> {
        let mut off = 0;
        self.shapes
            .iter()
            .map(|&(r, cc)| {
                let m = CMatrix::from_fn(r, cc, |i, j| {
                    let k = off + 2 * (j * r + i);
                    c(x[k], x[k + 1])
                });
                off += 2 * r * cc;
                m
            })
            .collect()
    }

    fn pack(&self, mats: &[CMatrix], out: &mut [f64]) {
        let mut off = 0;
        for m in mats {
            for z in m.as_slice() {
                out[off] = z.re;
                out[off + 1] = z.im;
                off += 2;
            }
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.len()).map(|_| rng.sample(StandardNormal)).collect()
    }
}

fn hs(x: &CMatrix, y: &CMatrix) -> C64 {
    // tr(y* x)
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Search for an `S`-independent set of size `m` by minimising
/// `sum_{p != q} |P_S(x_p x_q*)|^2 + sum_p (|x_p|^2 - 1)^2`. Any hit is
/// re-checked by [`verify_independent_set`].
pub fn alpha_search(
    s: &OperatorSystem,
    m: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let n = s.n();
    if m == 0 {
        return Err(Error::InvalidInput("target size must be positive".into()));
    }
    if m == 1 {
        let x = VectorTuple::standard(n, &[0]);
        return Ok(SearchOutcome::Found(verify_independent_set(s, &x)?));
    }
    let basis = s.basis();
    let layout = Layout {
        shapes: vec![(n, 1); m],
    };
    let objective = |x: &[f64], grad: &mut [f64]| -> f64 {
        let v = layout.unpack(x);
        // w[k][p] = Q_k* x_p, u[k][p] = Q_k x_p
        let w: Vec<Vec<CMatrix>> = basis
            .iter()
            .map(|q| v.iter().map(|xp| q.adjoint() * xp).collect())
            .collect();
        let u: Vec<Vec<CMatrix>> = basis
            .iter()
            .map(|q| v.iter().map(|xp| q * xp).collect())
            .collect();
        let mut g: Vec<CMatrix> = (0..m).map(|_| CMatrix::zeros(n, 1)).collect();
        let mut f = 0.0;
        for k in 0..basis.len() {
            for p in 0..m {
                for q in 0..m {
                    if p == q {
                        continue;
                    }
                    let cval = (v[q].adjoint() * &w[k][p])[(0, 0)];
                    f += cval.norm_sqr();
                    g[p] += &u[k][q] * (cval * 2.0);
                    g[q] += &w[k][p] * (cval.conj() * 2.0);
                }
            }
        }
        for p in 0..m {
            let nn = v[p].norm_squared() - 1.0;
            f += nn * nn;
            g[p] += v[p].scale(4.0 * nn);
        }
        layout.pack(&g, grad);
        f
    };
    let hit = first_success(budget.exec, budget.starts, |start| {
        let sd = start_seed(seed, start);
        let x0 = layout.random(&mut rng_from_seed(sd));
        let out = minimize(&objective, x0, &lbfgs(budget));
        let v = layout.unpack(&out.x);
        let vectors: Vec<Vec<C64>> = v.iter().map(|m| m.as_slice().to_vec()).collect();
        let tuple = VectorTuple::new(n, vectors).ok()?;
        let cert = verify_independent_set(s, &tuple).ok()?;
        cert.is_verified().then(|| cert.with_seed(Some(sd)))
    });
    Ok(match hit {
        Some((_, cert)) => SearchOutcome::Found(cert),
        None => SearchOutcome::not_found(budget),
    })
}

/// Outcome of a rank-one search in a matrix subspace.
#[derive(Debug, Clone, PartialEq)]
pub enum RankOneOutcome {
    /// A unit-norm element with `sigma_2 / sigma_1 < 1e-7`.
    Found(CMatrix),
    /// `exact` is true when the subspace provably has no rank-one element
    /// (zero subspace, or the `2 x 2` determinant argument).
    NotFound {
        exact: bool,
        starts: usize,
        max_iter: usize,
    },
}

fn det2(m: &CMatrix) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn rank_one_ratio(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.get(1)) {
        (Some(&a), Some(&b)) if a > 0.0 => b / a,
        (Some(&a), None) if a > 0.0 => 0.0,
        _ => f64::INFINITY,
    }
}

/// Look for a rank-one matrix in `V`. In `M_2` the question is settled
/// exactly through `det(c_1 B_1 + c_2 B_2) = 0`; otherwise a multi-start
/// search over `u v*` is run.
pub fn rank_one_in_subspace(
    v: &MatrixSubspace,
    seed: u64,
    budget: &SearchBudget,
) -> Result<RankOneOutcome> {
    let (rows, cols) = v.ambient();
    if rows != cols {
        return Err(Error::NonSquareAmbient { rows, cols });
    }
    let n = rows;
    let d = v.dim();
    if d == 0 {
        return Ok(RankOneOutcome::NotFound {
            exact: true,
            starts: 0,
            max_iter: 0,
        });
    }
    if n == 1 {
        return Ok(RankOneOutcome::Found(v.element(0)));
    }
    if n == 2 {
        let b1 = v.element(0);
        if d == 1 {
            if det2(&b1).norm() <= 1e-12 {
                return Ok(RankOneOutcome::Found(b1));
            }
            return Ok(RankOneOutcome::NotFound {
                exact: true,
                starts: 0,
                max_iter: 0,
            });
        }
        // det(t B1 + B2) = a t^2 + b t + c has a root over C
        let b2 = v.element(1);
        let a = det2(&b1);
        let cc = det2(&b2);
        let b = det2(&(&b1 + &b2)) - a - cc;
        let m = if a.norm() <= 1e-14 {
            b1
        } else {
            let disc = (b * b - a * cc * 4.0).sqrt();
            let t = (-b + disc) / (a * 2.0);
            &b1 * t + b2
        };
        let m = m.unscale(m.norm());
        return Ok(RankOneOutcome::Found(m));
    }
    let basis = v.basis();
    let layout = Layout {
        shapes: vec![(n, 1), (n, 1)],
    };
    let objective = |x: &[f64], grad: &mut [f64]| -> f64 {
        let w = layout.unpack(x);
        let (u, vv) = (&w[0], &w[1]);
        let (nu, nv) = (u.norm_squared(), vv.norm_squared());
        let mut f = nu * nv + (nu - 1.0).powi(2) + (nv - 1.0).powi(2);
        let mut gu = u.scale(2.0 * nv + 4.0 * (nu - 1.0));
        let mut gv = vv.scale(2.0 * nu + 4.0 * (nv - 1.0));
        for q in &basis {
            let qu = q.adjoint() * u;
            let cval = (vv.adjoint() * &qu)[(0, 0)];
            f -= cval.norm_sqr();
            gu -= (q * vv) * (cval * 2.0);
            gv -= qu * (cval.conj() * 2.0);
        }
        layout.pack(&[gu, gv], grad);
        f
    };
    let hit = first_success(budget.exec, budget.starts, |start| {
        let x0 = layout.random(&mut rng_from_seed(start_seed(seed, start)));
        let out = minimize(&objective, x0, &lbfgs(budget));
        let w = layout.unpack(&out.x);
        let outer = &w[0] * w[1].adjoint();
        let m = v.project(&outer).ok()?;
        let norm = m.norm();
        if norm < 1e-6 {
            return None;
        }
        let m = m.unscale(norm);
        (rank_one_ratio(&m) < 1e-7).then_some(m)
    });
    Ok(match hit {
        Some((_, m)) => RankOneOutcome::Found(m),
        None => RankOneOutcome::NotFound {
            exact: false,
            starts: budget.starts,
            max_iter: budget.max_iter,
        },
    })
}

/// What a Kraus search must achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausMode {
    /// `S_Phi` contained in `S` (subcomplexity).
    Contain,
    /// `S_Phi = S` (complexity).
    Equal,
}

/// Search for `m` Kraus operators in `M_{k,n}` with products in `S` by
/// minimising `sum_{p,j} |P_perp(A_p* A_j)|^2 + |sum A_p* A_p - I|^2`.
/// With `nonneg` the operators are entrywise squares of real matrices, so
/// any hit is non-cancelling and (in `Equal` mode) bounds the intersection
/// number.
#[allow(clippy::too_many_arguments)]
pub fn kraus_search(
    s: &OperatorSystem,
    k: usize,
    m: usize,
    mode: KrausMode,
    nonneg: bool,
    seed: u64,
    budget: &SearchBudget,
    tol: &Tolerance,
) -> Result<SearchOutcome> {
    let n = s.n();
    if k == 0 || m == 0 {
        return Err(Error::InvalidInput("k and m must be positive".into()));
    }
    let perp_basis = perp(s.space())?.basis();
    let layout = Layout {
        shapes: vec![(k, n); m],
    };
    let id = identity(n);
    let kraus_grad = |a: &[CMatrix]| -> (f64, Vec<CMatrix>) {
        let mut f = 0.0;
        let mut g: Vec<CMatrix> = (0..m).map(|_| CMatrix::zeros(k, n)).collect();
        let mut e = -id.clone();
        for ap in a {
            e += ap.adjoint() * ap;
        }
        for p in 0..m {
            let apd = a[p].adjoint();
            for j in 0..m {
                let prod = &apd * &a[j];
                let mut r = CMatrix::zeros(n, n);
                for q in &perp_basis {
                    r += q * hs(&prod, q);
                }
                f += r.norm_squared();
                g[p] += &a[j] * r.adjoint() * c(4.0, 0.0);
            }
            g[p] += &a[p] * &e * c(4.0, 0.0);
        }
        f += e.norm_squared();
        (f, g)
    };
    let real_len = m * k * n;
    let to_nonneg = |x: &[f64]| -> Vec<CMatrix> {
        (0..m)
            .map(|p| CMatrix::from_fn(k, n, |i, j| c(x[p * k * n + j * k + i].powi(2), 0.0)))
            .collect()
    };
    let objective = |x: &[f64], grad: &mut [f64]| -> f64 {
        if nonneg {
            let a = to_nonneg(x);
            let (f, g) = kraus_grad(&a);
            for p in 0..m {
                for j in 0..n {
                    for i in 0..k {
                        let idx = p * k * n + j * k + i;
                        grad[idx] = 2.0 * x[idx] * g[p][(i, j)].re;
                    }
                }
            }
            f
        } else {
            let a = layout.unpack(x);
            let (f, g) = kraus_grad(&a);
            layout.pack(&g, grad);
            f
        }
    };
    let hit = first_success(budget.exec, budget.starts, |start| {
        let sd = start_seed(seed, start);
        let mut rng = rng_from_seed(sd);
        let scale = 1.0 / ((m * k) as f64).sqrt();
        let x0: Vec<f64> = if nonneg {
            (0..real_len)
                .map(|_| rng.random_range(0.0..1.0f64).sqrt() * scale.sqrt() * 1.5)
                .collect()
        } else {
            layout.random(&mut rng).iter().map(|v| v * scale).collect()
        };
        let out = minimize(&objective, x0, &lbfgs(budget));
        let a = if nonneg {
            polish_support(&to_nonneg(&out.x), &kraus_grad, budget)?
        } else {
            layout.unpack(&out.x)
        };
        let mut t = CMatrix::zeros(n, n);
        for ap in &a {
            t += ap.adjoint() * ap;
        }
        let fix = pd_inv_sqrt(&t).ok()?;
        let kraus: Vec<CMatrix> = a.iter().map(|ap| ap * &fix).collect();
        let ch = QuantumChannel::new(n, k, kraus).ok()?;
        let cert = match (mode, nonneg) {
            (KrausMode::Contain, _) => verify_beta_certificate(s, &ch, tol).ok()?,
            (KrausMode::Equal, false) => verify_gamma_certificate(s, &ch, tol).ok()?,
            (KrausMode::Equal, true) => {
                if !verify_noncancelling(&ch) {
                    return None;
                }
                iota_certificate(s, &ch, tol).ok()?
            }
        };
        cert.is_verified().then(|| cert.with_seed(Some(sd)))
    });
    Ok(match hit {
        Some((_, cert)) => SearchOutcome::Found(cert),
        None => SearchOutcome::not_found(budget),
    })
}

/// Squared parametrisations approach zero entries only slowly, so snap
/// small entries to zero and refine the remaining support as plain real
/// variables.
fn polish_support<F>(a: &[CMatrix], kraus_grad: &F, budget: &SearchBudget) -> Option<Vec<CMatrix>>
where
    F: Fn(&[CMatrix]) -> (f64, Vec<CMatrix>),
{
    let top = a.iter().map(crate::numkernel::max_abs).fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    let (k, n) = a[0].shape();
    let support: Vec<(usize, usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(p, m)| {
            (0..n).flat_map(move |j| (0..k).map(move |i| (p, i, j)))
                .filter(move |&(_, i, j)| m[(i, j)].re > 1e-3 * top)
        })
        .collect();
    let build = |y: &[f64]| -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = a.iter().map(|_| CMatrix::zeros(k, n)).collect();
        for (&(p, i, j), &v) in support.iter().zip(y) {
            out[p][(i, j)] = c(v, 0.0);
        }
        out
    };
    let objective = |y: &[f64], grad: &mut [f64]| -> f64 {
        let (f, g) = kraus_grad(&build(y));
        for (gi, &(p, i, j)) in grad.iter_mut().zip(&support) {
            *gi = g[p][(i, j)].re;
        }
        f
    };
    let y0: Vec<f64> = support.iter().map(|&(p, i, j)| a[p][(i, j)].re).collect();
    let out = minimize(objective, y0, &lbfgs(budget));
    if out.x.iter().any(|&v| v < 0.0) {
        return None;
    }
    Some(build(&out.x))
}

/// Search for projections `P_i` of ranks `t_i` in `M_k` with non-orthogonality
/// graph `G`, via isometries `X_i` minimising
/// `sum_{i !~ j} |X_i* X_j|^2 + sum_i |X_i* X_i - I|^2`.
pub fn qinter_search(
    g: &Graph,
    k: usize,
    t: &[usize],
    seed: u64,
    budget: &SearchBudget,
    tol: &Tolerance,
) -> Result<SearchOutcome> {
    let n = g.n();
    if t.len() != n || t.contains(&0) || k == 0 {
        return Err(Error::InvalidInput(format!(
            "rank vector {t:?} and dimension {k} do not fit {n} vertices"
        )));
    }
    if t.iter().any(|&ti| ti > k) {
        return Ok(SearchOutcome::not_found(budget));
    }
    let layout = Layout {
        shapes: t.iter().map(|&ti| (k, ti)).collect(),
    };
    let non_edges: Vec<(usize, usize)> = g.complement().edges();
    let objective = |x: &[f64], grad: &mut [f64]| -> f64 {
        let xs = layout.unpack(x);
        let mut f = 0.0;
        let mut gs: Vec<CMatrix> = xs.iter().map(|m| CMatrix::zeros(m.nrows(), m.ncols())).collect();
        for (i, xi) in xs.iter().enumerate() {
            let e = xi.adjoint() * xi - identity(t[i]);
            f += e.norm_squared();
            gs[i] += xi * e * c(4.0, 0.0);
        }
        for &(i, j) in &non_edges {
            let cross = xs[i].adjoint() * &xs[j];
            f += cross.norm_squared();
            gs[i] += &xs[j] * cross.adjoint() * c(2.0, 0.0);
            gs[j] += &xs[i] * &cross * c(2.0, 0.0);
        }
        layout.pack(&gs, grad);
        f
    };
    let hit = first_success(budget.exec, budget.starts, |start| {
        let sd = start_seed(seed, start);
        let x0 = layout.random(&mut rng_from_seed(sd));
        let out = minimize(&objective, x0, &lbfgs(budget));
        let xs = layout.unpack(&out.x);
        let projections: Vec<CMatrix> = xs
            .iter()
            .map(|xi| {
                let b = range_basis(xi, tol);
                &b * b.adjoint()
            })
            .collect();
        let p = ProjectionTuple::new(k, projections, tol).ok()?;
        if p.ranks() != t {
            return None;
        }
        let cert = qinter_certificate(g, &p);
        cert.is_verified().then(|| cert.with_seed(Some(sd)))
    });
    Ok(match hit {
        Some((_, cert)) => SearchOutcome::Found(cert),
        None => SearchOutcome::not_found(budget),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{diag_real, matrix_unit};
    use crate::opsys::{full_system, graph_system, scalar_system, sk_system};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn quick() -> SearchBudget {
        SearchBudget::new(6, 1500)
    }

    #[test]
    fn alpha_examples() {
        let c5 = graph_system(&Graph::cycle(5));
        let found = alpha_search(&c5, 2, 0, &quick()).unwrap();
        assert!(found.certificate().unwrap().is_verified());
        let none = alpha_search(&full_system(2), 2, 0, &SearchBudget::new(2, 300)).unwrap();
        assert!(matches!(none, SearchOutcome::NotFound { starts: 2, .. }));
        let s = alpha_search(&scalar_system(3), 3, 1, &quick()).unwrap();
        assert_eq!(s.certificate().unwrap().value(), 3);
    }

    #[test]
    fn rank_one_examples() {
        let diag = crate::numkernel::orthonormalize(&[diag_real(&[1.0, -1.0])], &tol()).unwrap();
        assert!(matches!(
            rank_one_in_subspace(&diag, 0, &quick()).unwrap(),
            RankOneOutcome::NotFound { exact: true, .. }
        ));
        let e12 = crate::numkernel::orthonormalize(&[matrix_unit(2, 2, 0, 1)], &tol()).unwrap();
        assert!(matches!(
            rank_one_in_subspace(&e12, 0, &quick()).unwrap(),
            RankOneOutcome::Found(_)
        ));
        let two = crate::numkernel::orthonormalize(
            &[diag_real(&[1.0, -1.0]), matrix_unit(2, 2, 0, 1) + matrix_unit(2, 2, 1, 0)],
            &tol(),
        )
        .unwrap();
        match rank_one_in_subspace(&two, 0, &quick()).unwrap() {
            RankOneOutcome::Found(m) => {
                assert!(rank_one_ratio(&m) < 1e-7);
                assert!(two.residual(&m).unwrap() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        let p = graph_system(&Graph::cycle(5)).perp();
        match rank_one_in_subspace(&p, 3, &quick()).unwrap() {
            RankOneOutcome::Found(m) => assert!(p.residual(&m).unwrap() < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kraus_gradient_matches_finite_differences() {
        let s = sk_system(2);
        let perp_basis = perp(s.space()).unwrap().basis();
        let (k, n, m) = (3, 2, 2);
        let layout = Layout {
            shapes: vec![(k, n); m],
        };
        let f = |a: &[CMatrix]| -> f64 {
            let mut e = -identity(n);
            let mut val = 0.0;
            for ap in a {
                e += ap.adjoint() * ap;
            }
            for p in 0..m {
                for j in 0..m {
                    let prod = a[p].adjoint() * &a[j];
                    let mut r = CMatrix::zeros(n, n);
                    for q in &perp_basis {
                        r += q * hs(&prod, q);
                    }
                    val += r.norm_squared();
                }
            }
            val + e.norm_squared()
        };
        let x = layout.random(&mut rng_from_seed(1));
        let a = layout.unpack(&x);
        let mut e = -identity(n);
        for ap in &a {
            e += ap.adjoint() * ap;
        }
        let mut g: Vec<CMatrix> = (0..m).map(|_| CMatrix::zeros(k, n)).collect();
        for p in 0..m {
            for j in 0..m {
                let prod = a[p].adjoint() * &a[j];
                let mut r = CMatrix::zeros(n, n);
                for q in &perp_basis {
                    r += q * hs(&prod, q);
                }
                g[p] += &a[j] * r.adjoint() * c(4.0, 0.0);
            }
            g[p] += &a[p] * &e * c(4.0, 0.0);
        }
        let mut packed = vec![0.0; layout.len()];
        layout.pack(&g, &mut packed);
        for idx in [0, 3, 7, 11, 20] {
            let h = 1e-6;
            let mut xp = x.clone();
            xp[idx] += h;
            let mut xm = x.clone();
            xm[idx] -= h;
            let fd = (f(&layout.unpack(&xp)) - f(&layout.unpack(&xm))) / (2.0 * h);
            assert!((fd - packed[idx]).abs() < 1e-5 * (1.0 + fd.abs()), "{idx}: {fd} vs {}", packed[idx]);
        }
    }

    #[test]
    fn kraus_search_on_s2() {
        let s2 = sk_system(2);
        let beta = kraus_search(&s2, 2, 1, KrausMode::Contain, false, 0, &quick(), &tol()).unwrap();
        assert_eq!(beta.certificate().unwrap().value(), 2);
        let gamma = kraus_search(&s2, 3, 2, KrausMode::Equal, false, 0, &quick(), &tol()).unwrap();
        assert!(gamma.certificate().unwrap().is_verified());
        let iota = kraus_search(&s2, 3, 2, KrausMode::Equal, true, 0, &quick(), &tol()).unwrap();
        let cert = iota.certificate().expect("non-negative witness");
        assert!(verify_noncancelling(cert.channel().unwrap()));
    }

    #[test]
    fn qinter_examples() {
        let k4 = Graph::complete(4);
        let one = qinter_search(&k4, 1, &[1; 4], 0, &quick(), &tol()).unwrap();
        assert_eq!(one.certificate().unwrap().value(), 1);
        let c5 = Graph::cycle(5);
        let three = qinter_search(&c5, 3, &[1; 5], 0, &quick(), &tol()).unwrap();
        assert!(three.certificate().unwrap().is_verified());
        let e3 = Graph::empty(3);
        let none = qinter_search(&e3, 2, &[1; 3], 0, &SearchBudget::new(3, 300), &tol()).unwrap();
        assert!(matches!(none, SearchOutcome::NotFound { .. }));
    }
}
