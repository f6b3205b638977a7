//! Seeded random instances for searches, property checks and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::error::Result;
use crate::graphs::{ClassicalChannel, Graph, VectorTuple};
use crate::numkernel::{c, CMatrix, Tolerance};
use crate::opsys::{make_operator_system, OperatorSystem};

/// Deterministic generator for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with independent standard complex Gaussian parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn gaussian_real_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.sample(StandardNormal), 0.0))
}

/// Haar-distributed isometry `rows x cols` (`rows >= cols`): QR of a Gaussian
/// matrix with the phases of `R`'s diagonal absorbed into `Q`.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = gaussian_matrix(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    random_isometry(n, n, rng)
}

/// A channel `M_n -> M_k` with `m` Kraus operators: the blocks of a random
/// isometry `C^n -> C^{mk}`.
pub fn random_channel<R: Rng + ?Sized>(n: usize, k: usize, m: usize, rng: &mut R) -> QuantumChannel {
    let v = random_isometry(m * k, n, rng);
    let kraus = (0..m).map(|p| v.rows(p * k, k).into_owned()).collect();
    QuantumChannel::new_unchecked(n, k, kraus)
}

/// Operator system generated by `generators` random matrices.
pub fn random_operator_system<R: Rng + ?Sized>(
    n: usize,
    generators: usize,
    rng: &mut R,
) -> Result<OperatorSystem> {
    let mats: Vec<CMatrix> = (0..generators).map(|_| gaussian_matrix(n, n, rng)).collect();
    make_operator_system(n, &mats, &Tolerance::default())
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn random_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

/// Vectors in `C^k` whose entries are zero with probability `sparsity`, so
/// that orthogonal pairs actually occur.
pub fn random_vector_tuple<R: Rng + ?Sized>(
    k: usize,
    n: usize,
    sparsity: f64,
    rng: &mut R,
) -> VectorTuple {
    let vectors = (0..n)
        .map(|_| loop {
            let v: Vec<_> = (0..k)
                .map(|_| {
                    if rng.random_bool(sparsity) {
                        c(0.0, 0.0)
                    } else {
                        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    }
                })
                .collect();
            if v.iter().any(|z| z.norm() > 0.0) {
                break v;
            }
        })
        .collect();
    VectorTuple::new(k, vectors).expect("non-zero by construction")
}

/// Column-stochastic matrix whose support is random with the given density.
pub fn random_classical_channel<R: Rng + ?Sized>(
    inputs: usize,
    outputs: usize,
    density: f64,
    rng: &mut R,
) -> ClassicalChannel {
    let mut probs = vec![vec![0.0; inputs]; outputs];
    for x in 0..inputs {
        let mut support: Vec<usize> = (0..outputs).filter(|_| rng.random_bool(density)).collect();
        if support.is_empty() {
            support.push(rng.random_range(0..outputs));
        }
        let weights: Vec<f64> = support.iter().map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (&y, w) in support.iter().zip(&weights) {
            probs[y][x] = w / total;
        }
    }
    ClassicalChannel::new(inputs, outputs, probs).expect("normalised by construction")
}
