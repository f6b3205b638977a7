//! Test-only oracles, kept independent of the library's solvers.
#![allow(dead_code)]

use ncgraph::numkernel::{CMatrix, C64};

/// Adjacency as a dense boolean matrix, built from an edge list.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in edges {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// Smallest `m` for which non-empty sets `R_i` of `{0..m}` exist with
/// `R_i & R_j != 0` exactly on the edges. Exhaustive assignment search over
/// all non-empty subsets (as bitmasks), vertex by vertex, rejecting a partial
/// assignment as soon as one pair disagrees with the graph.
pub fn brute_force_intersection_number(n: usize, edges: &[(usize, usize)]) -> usize {
    let adj = adjacency(n, edges);
    if n == 0 {
        return 0;
    }
    for m in 1.. {
        let mut sets = vec![0u32; n];
        if assign(&adj, m, 0, &mut sets) {
            return m;
        }
    }
    unreachable!()
}

fn assign(adj: &[Vec<bool>], m: usize, v: usize, sets: &mut [u32]) -> bool {
    let n = adj.len();
    if v == n {
        return true;
    }
    for s in 1u32..(1u32 << m) {
        let ok = (0..v).all(|u| ((sets[u] & s) != 0) == adj[u][v]);
        if ok {
            sets[v] = s;
            if assign(adj, m, v + 1, sets) {
                return true;
            }
        }
    }
    false
}

/// Every labelled graph on `n` vertices, deduplicated up to isomorphism by
/// brute force over all `n!` relabellings.
pub fn all_graphs_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut code = 0u64;
                for &(i, j) in &edges {
                    let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                    let idx = pairs.iter().position(|&e| e == (a, b)).unwrap();
                    code |= 1 << idx;
                }
                code
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(edges);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Independence number by subset enumeration.
pub fn brute_force_alpha(n: usize, edges: &[(usize, usize)]) -> usize {
    let adj = adjacency(n, edges);
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts.len() <= best {
            continue;
        }
        let indep = verts
            .iter()
            .all(|&a| verts.iter().all(|&b| a == b || !adj[a][b]));
        if indep {
            best = verts.len();
        }
    }
    best
}

/// Chromatic number by trying every colouring with `k` colours.
pub fn brute_force_chromatic(n: usize, edges: &[(usize, usize)]) -> usize {
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let colors: Vec<usize> = (0..n)
                .map(|_| {
                    let x = c % k;
                    c /= k;
                    x
                })
                .collect();
            if edges.iter().all(|&(i, j)| colors[i] != colors[j]) {
                return k;
            }
        }
    }
    n
}

fn flat(m: &CMatrix) -> Vec<C64> {
    m.iter().copied().collect()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Component of `v` orthogonal to the orthonormal vectors in `basis`,
/// with one re-orthogonalisation pass.
fn reject(basis: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let dot: C64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in r.iter_mut().zip(q) {
                *x -= dot * y;
            }
        }
    }
    r
}

/// Orthonormal basis of `span(ms)` by Gram-Schmidt. A vector counts as new
/// when its rejection exceeds `rel` times the largest norm in `ms`.
pub fn span_basis(ms: &[CMatrix], rel: f64) -> Vec<Vec<C64>> {
    let scale = ms.iter().map(|m| norm(&flat(m))).fold(0.0, f64::max);
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for m in ms {
        let v = flat(m);
        let r = reject(&basis, &v);
        let nr = norm(&r);
        if nr > rel * scale {
            basis.push(r.into_iter().map(|z| z / nr).collect());
        }
    }
    basis
}

/// Dimension of `span(ms)`.
pub fn span_dim(ms: &[CMatrix], rel: f64) -> usize {
    span_basis(ms, rel).len()
}

/// Largest distance of an element of `ms` from `span(basis)`, relative to
/// the largest norm in `ms`.
pub fn span_residual(basis: &[Vec<C64>], ms: &[CMatrix]) -> f64 {
    let scale = ms.iter().map(|m| norm(&flat(m))).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    ms.iter()
        .map(|m| norm(&reject(basis, &flat(m))) / scale)
        .fold(0.0, f64::max)
}

/// Compare two spanning sets: both dimensions and the worst relative
/// residual of either set against the other's span.
pub fn compare_spans(a: &[CMatrix], b: &[CMatrix], rel: f64) -> (usize, usize, f64) {
    let ba = span_basis(a, rel);
    let bb = span_basis(b, rel);
    let res = span_residual(&ba, b).max(span_residual(&bb, a));
    (ba.len(), bb.len(), res)
}

/// All products `A_i^* A_j` of a list of Kraus operators.
pub fn kraus_products(kraus: &[CMatrix]) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for a in kraus {
        for b in kraus {
            out.push(a.adjoint() * b);
        }
    }
    out
}

/// Matrix units `E_ij` for `i = j` or `i ~ j`: a spanning set of `S_G`.
pub fn graph_units(n: usize, edges: &[(usize, usize)]) -> Vec<CMatrix> {
    let adj = adjacency(n, edges);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || adj[i][j] {
                let mut m = CMatrix::zeros(n, n);
                m[(i, j)] = C64::new(1.0, 0.0);
                out.push(m);
            }
        }
    }
    out
}

/// Graph whose edges join non-orthogonal vectors.
pub fn non_orthogonal_pairs(vectors: &[Vec<C64>], rel: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let dot: C64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a.conj() * b).sum();
            if dot.norm() > rel * norm(&vectors[i]) * norm(&vectors[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Confusability edges of a classical channel given as `probs[y][x]`.
pub fn classical_confusable(probs: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let inputs = probs.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for x in 0..inputs {
        for x2 in x + 1..inputs {
            if probs.iter().any(|row| row[x] > 0.0 && row[x2] > 0.0) {
                out.push((x, x2));
            }
        }
    }
    out
}

/// Lovasz theta of an odd cycle in closed form.
pub fn odd_cycle_theta(n: usize) -> f64 {
    let c = (std::f64::consts::PI / n as f64).cos();
    n as f64 * c / (1.0 + c)
}

/// Independence number by include/exclude branching on bitmasks; fine up to
/// a few dozen vertices when the graph is dense enough.
pub fn branching_alpha(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut nb = vec![0u64; n];
    for &(i, j) in edges {
        nb[i] |= 1 << j;
        nb[j] |= 1 << i;
    }
    fn go(nb: &[u64], cand: u64) -> usize {
        if cand == 0 {
            return 0;
        }
        let v = cand.trailing_zeros() as usize;
        let without = go(nb, cand & !(1 << v));
        let with = 1 + go(nb, cand & !(1 << v) & !nb[v]);
        with.max(without)
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(&nb, all)
}
