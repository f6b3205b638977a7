//! Lovász theta: a dense SDP solver for graphs, witness-certified lower
//! bounds for operator systems, the capacity chain and the `S_k (x) S_{k^2}`
//! separation between subcomplexity and theta.

mod capacity;
mod construction;
mod sdp;

pub use capacity::{capacity_report, CapacityCheck, CapacityReport, CapacityTarget, ThetaValue};
pub use construction::{betabetter_construction, BetaBetter, ConstructionCheck};
pub use sdp::{sdp_solve, SdpProblem, SdpSolution};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numkernel::{
    c, hermitian_eigen, identity, is_psd, kron, largest_eigenvalue, matrix_unit, require_hermitian,
    CMatrix, MatrixJson, Tolerance,
};
use crate::opsys::{self, graph_system, OperatorSystem};
use crate::random::rng_from_seed;

/// Largest graph accepted by [`lovasz_theta`].
pub const THETA_LIMIT: usize = 60;

/// A Hermitian `K` in the perp of an operator system with `I + K` positive;
/// `value = ||I + K||` is a lower bound on theta of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaWitness {
    n: usize,
    k: CMatrix,
    value: f64,
}

impl ThetaWitness {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &CMatrix {
        &self.k
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaWitnessJson {
    pub n: usize,
    pub k: MatrixJson,
    pub value: f64,
}

impl From<&ThetaWitness> for ThetaWitnessJson {
    fn from(w: &ThetaWitness) -> Self {
        Self {
            n: w.n,
            k: MatrixJson::from_matrix(&w.k),
            value: w.value,
        }
    }
}

/// Check `K` in `S^perp` and `I + K >= 0`; the value is `lambda_max(I + K)`.
pub fn verify_theta_witness(
    s: &OperatorSystem,
    k: &CMatrix,
    tol: &Tolerance,
) -> Result<ThetaWitness> {
    let n = s.n();
    if k.shape() != (n, n) {
        return Err(Error::AmbientMismatch {
            left: n,
            right: k.nrows(),
        });
    }
    let k = require_hermitian(k, 1e-10)?;
    let inside = s.perp_residual(&k)?;
    if inside > 1e-8 * (1.0 + k.norm()) {
        return Err(Error::NotInPerp { residual: inside });
    }
    let shifted = identity(n) + &k;
    let report = is_psd(&shifted, tol)?;
    if !report.is_psd {
        return Err(Error::NotPsd {
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    Ok(ThetaWitness {
        n,
        value: largest_eigenvalue(&shifted),
        k,
    })
}

/// `K = (I + K1) (x) (I + K2) - I`, checked against `S1 (x) S2`. The value
/// is the product of the factor values.
pub fn tensor_theta_witness(
    s1: &OperatorSystem,
    w1: &ThetaWitness,
    s2: &OperatorSystem,
    w2: &ThetaWitness,
    tol: &Tolerance,
) -> Result<ThetaWitness> {
    let a = identity(w1.n) + &w1.k;
    let b = identity(w2.n) + &w2.k;
    let n = w1.n * w2.n;
    let k = kron(&a, &b) - identity(n);
    verify_theta_witness(&opsys::tensor(s1, s2), &k, tol)
}

/// Solve `max <J, X>` subject to `tr X = 1`, `X_ij = 0` on edges, `X >= 0`.
pub fn lovasz_theta_sdp(g: &Graph) -> Result<SdpSolution> {
    let n = g.n();
    if n > THETA_LIMIT {
        return Err(Error::TooLarge {
            what: "vertices",
            size: n,
            limit: THETA_LIMIT,
        });
    }
    let j = CMatrix::from_element(n, n, c(1.0, 0.0));
    let mut constraints = vec![(identity(n), 1.0)];
    for (a, b) in g.edges() {
        constraints.push((matrix_unit(n, n, a, b) + matrix_unit(n, n, b, a), 0.0));
    }
    sdp_solve(&SdpProblem::new(j, constraints)?)
}

pub fn lovasz_theta(g: &Graph) -> Result<f64> {
    if g.n() == 0 {
        return Ok(0.0);
    }
    Ok(lovasz_theta_sdp(g)?.value)
}

/// Turn an optimal theta matrix into a witness for `S_G`:
/// `I + K = D^{-1/2} X D^{-1/2}` restricted to the support of `diag X`.
pub fn graph_theta_witness(g: &Graph, sol: &SdpSolution, tol: &Tolerance) -> Result<ThetaWitness> {
    let n = g.n();
    if sol.x.shape() != (n, n) {
        return Err(Error::VertexCountMismatch {
            left: n,
            right: sol.x.nrows(),
        });
    }
    let d: Vec<f64> = (0..n).map(|i| sol.x[(i, i)].re).collect();
    let top = d.iter().copied().fold(0.0, f64::max);
    let keep: Vec<bool> = d.iter().map(|&v| v > 1e-9 * top).collect();
    let shrink = 1.0 - 1e-9;
    let k = CMatrix::from_fn(n, n, |i, j| {
        if i == j || !keep[i] || !keep[j] || g.has_edge(i, j) {
            c(0.0, 0.0)
        } else {
            sol.x[(i, j)] / (d[i] * d[j]).sqrt() * shrink
        }
    });
    verify_theta_witness(&graph_system(g), &k, tol)
}

/// Real spanning set of the Hermitian part of `S^perp`.
fn hermitian_perp_directions(s: &OperatorSystem) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for b in s.perp().basis() {
        let h = (&b + b.adjoint()).scale(0.5);
        let a = (&b - b.adjoint()) * c(0.0, -0.5);
        for m in [h, a] {
            if m.norm() > 1e-10 {
                out.push(m);
            }
        }
    }
    out
}

/// Best `1 + lambda_max(H) / |lambda_min(H)|` over sampled Hermitian
/// directions `H` in `S^perp`. Heuristic: the result is a certified lower
/// bound, and the search only indicates (never proves) that nothing larger
/// exists.
pub fn theta_probe(
    s: &OperatorSystem,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<ThetaWitness> {
    let n = s.n();
    let dirs = hermitian_perp_directions(s);
    if dirs.is_empty() {
        return verify_theta_witness(s, &CMatrix::zeros(n, n), tol);
    }
    let score = |h: &CMatrix| -> Option<(f64, CMatrix)> {
        let (ev, _) = hermitian_eigen(h);
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        (lo < -1e-12).then(|| (1.0 + hi / -lo, h.unscale(-lo) * c(1.0 - 1e-12, 0.0)))
    };
    let mut rng = rng_from_seed(seed);
    let mut best: Option<(f64, CMatrix)> = None;
    let consider = |h: CMatrix, best: &mut Option<(f64, CMatrix)>| {
        if let Some((v, k)) = score(&h) {
            if best.as_ref().is_none_or(|b| v > b.0) {
                *best = Some((v, k));
            }
        }
    };
    for d in &dirs {
        consider(d.clone(), &mut best);
        consider(-d.clone(), &mut best);
    }
    for _ in 0..samples {
        let mut h = CMatrix::zeros(n, n);
        for d in &dirs {
            let g: f64 = rng.sample(StandardNormal);
            h += d * c(g, 0.0);
        }
        consider(h, &mut best);
    }
    let k = best.map_or_else(|| CMatrix::zeros(n, n), |b| b.1);
    verify_theta_witness(s, &k, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsys::{scalar_system, sk_system, sk_theta_direction};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn theta_of_small_graphs() {
        assert!((lovasz_theta(&Graph::cycle(5)).unwrap() - 5f64.sqrt()).abs() < 1e-6);
        assert!((lovasz_theta(&Graph::complete(4)).unwrap() - 1.0).abs() < 1e-6);
        assert!((lovasz_theta(&Graph::empty(4)).unwrap() - 4.0).abs() < 1e-6);
        assert!((lovasz_theta(&Graph::cycle(6)).unwrap() - 3.0).abs() < 1e-6);
        assert!(matches!(
            lovasz_theta(&Graph::empty(61)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sdp_witness_for_c5() {
        let g = Graph::cycle(5);
        let sol = lovasz_theta_sdp(&g).unwrap();
        let w = graph_theta_witness(&g, &sol, &tol()).unwrap();
        assert!((w.value() - 5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn witnesses() {
        for k in 2..5 {
            let w = verify_theta_witness(&sk_system(k), &sk_theta_direction(k), &tol()).unwrap();
            assert!((w.value() - k as f64).abs() < 1e-12);
        }
        let zero = verify_theta_witness(&sk_system(3), &CMatrix::zeros(3, 3), &tol()).unwrap();
        assert!((zero.value() - 1.0).abs() < 1e-12);
        let k = matrix_unit(3, 3, 0, 0).scale(3.0) - identity(3);
        let w = verify_theta_witness(&scalar_system(3), &k, &tol()).unwrap();
        assert!((w.value() - 3.0).abs() < 1e-12);
        assert!(matches!(
            verify_theta_witness(&sk_system(2), &matrix_unit(2, 2, 0, 1), &tol()),
            Err(Error::NotHermitian { .. })
        ));
        let off = matrix_unit(2, 2, 0, 1) + matrix_unit(2, 2, 1, 0);
        assert!(matches!(
            verify_theta_witness(&sk_system(2), &off, &tol()),
            Err(Error::NotInPerp { .. })
        ));
        let big = sk_theta_direction(2).scale(-3.0);
        assert!(matches!(
            verify_theta_witness(&sk_system(2), &big, &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn tensor_witness_multiplies() {
        let (s2, s4) = (sk_system(2), sk_system(4));
        let w2 = verify_theta_witness(&s2, &sk_theta_direction(2), &tol()).unwrap();
        let w4 = verify_theta_witness(&s4, &sk_theta_direction(4), &tol()).unwrap();
        let w = tensor_theta_witness(&s2, &w2, &s4, &w4, &tol()).unwrap();
        assert!((w.value() - 8.0).abs() < 1e-12);
        assert!((w.value() - w2.value() * w4.value()).abs() < 1e-12);
    }

    #[test]
    fn probe_never_beats_k() {
        for k in 2..5 {
            let w = theta_probe(&sk_system(k), 200, 7, &tol()).unwrap();
            assert!(w.value() <= k as f64 + 1e-9, "{}", w.value());
            assert!(w.value() > 1.0);
        }
    }
}
