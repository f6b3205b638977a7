//! Simple graphs, classical channels and exact combinatorial parameters.

mod classical;
mod enumerate;
mod exact;

pub use classical::{
    channel_from_sets, complexity, confusability_graph, intersection_graph, ClassicalChannel,
    ClassicalChannelJson,
};
pub use enumerate::{canonical_code, nonisomorphic_graphs};
pub use exact::{
    chromatic_number, independence_number, intersection_number, maximum_independent_set,
    minimum_coloring, shannon_capacity_lower, IntersectionWitness, CHROMATIC_LIMIT,
    INDEPENDENCE_LIMIT, INTERSECTION_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::channels::ProjectionTuple;
use crate::error::{Error, Result};
use crate::numkernel::{frobenius, C64};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.set_edge(i, j, true);
            }
        }
        g
    }

    /// The cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.set_edge(i, (i + 1) % n, true);
            }
        } else if n == 2 {
            g.set_edge(0, 1, true);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("loop at vertex {i}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    /// Non-strict adjacency: `i == j` or `ij` is an edge.
    pub fn adjacent_or_equal(&self, i: usize, j: usize) -> bool {
        i == j || self.adj[i][j]
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        if i != j {
            self.adj[i][j] = present;
            self.adj[j][i] = present;
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i][j] {
                    e.push((i, j));
                }
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.adj[v][u])
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in i + 1..self.n {
                g.set_edge(i, j, !self.adj[i][j]);
            }
        }
        g
    }

    /// Strong product; vertex `(x, y)` has index `x * h.n() + y`.
    pub fn strong_product(&self, h: &Graph) -> Graph {
        let m = h.n;
        let mut g = Graph::empty(self.n * m);
        for x in 0..self.n {
            for y in 0..m {
                for x2 in 0..self.n {
                    for y2 in 0..m {
                        let (a, b) = (x * m + y, x2 * m + y2);
                        if a < b && self.adjacent_or_equal(x, x2) && h.adjacent_or_equal(y, y2) {
                            g.set_edge(a, b, true);
                        }
                    }
                }
            }
        }
        g
    }

    pub fn strong_power(&self, r: usize) -> Graph {
        let mut g = Graph::complete(1);
        for _ in 0..r {
            g = g.strong_product(self);
        }
        g
    }

    /// Whether every edge of `self` is an edge of `g`.
    pub fn is_subgraph(&self, g: &Graph) -> Result<bool> {
        if self.n != g.n {
            return Err(Error::VertexCountMismatch {
                left: self.n,
                right: g.n,
            });
        }
        Ok(self.edges().iter().all(|&(i, j)| g.adj[i][j]))
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 0).collect()
    }

    /// Relabel: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (i, j) in self.edges() {
            g.set_edge(perm[i], perm[j], true);
        }
        g
    }

    pub(crate) fn neighbor_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.neighbors(v).fold(0u64, |m, u| m | (1 << u))
    }
}

/// Wire format: `{"n": int, "edges": [[i, j], ...]}` with 0-indexed vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.n,
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(self.n, &edges)
    }
}

/// An `n`-tuple of non-zero vectors in `C^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTuple {
    k: usize,
    vectors: Vec<Vec<C64>>,
}

impl VectorTuple {
    pub fn new(k: usize, vectors: Vec<Vec<C64>>) -> Result<Self> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != k {
                return Err(Error::ShapeMismatch {
                    expected: (k, 1),
                    found: (v.len(), 1),
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("vector entries must be finite".into()));
            }
            if norm(v) <= 1e-12 {
                return Err(Error::ZeroVector { index: i });
            }
        }
        Ok(Self { k, vectors })
    }

    /// Standard basis vectors `e_i`, `i in indices`, of `C^k`.
    pub fn standard(k: usize, indices: &[usize]) -> Self {
        let vectors = indices
            .iter()
            .map(|&i| {
                let mut v = vec![C64::new(0.0, 0.0); k];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { k, vectors }
    }

    /// Columns of a `k x n` matrix.
    pub fn from_columns(m: &crate::numkernel::CMatrix) -> Result<Self> {
        let vectors = (0..m.ncols())
            .map(|j| m.column(j).iter().copied().collect())
            .collect();
        Self::new(m.nrows(), vectors)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &[C64] {
        &self.vectors[i]
    }

    /// The `k x n` matrix whose columns are the vectors.
    pub fn to_matrix(&self) -> crate::numkernel::CMatrix {
        crate::numkernel::CMatrix::from_fn(self.k, self.vectors.len(), |r, c| self.vectors[c][r])
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x, y> = sum x_r conj(y_r)`.
pub(crate) fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Non-orthogonality graph: `i ~ j` iff `|<x_j, x_i>| > 1e-10 |x_i| |x_j|`.
pub fn non_orthogonality_graph(x: &VectorTuple) -> Graph {
    let n = x.len();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (x.get(i), x.get(j));
            if inner(b, a).norm() > 1e-10 * norm(a) * norm(b) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

/// Non-orthogonality graph of projections: `i ~ j` iff `|P_i P_j| > 1e-10`.
pub fn non_orthogonality_graph_proj(p: &ProjectionTuple) -> Graph {
    let n = p.len();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if frobenius(&(p.get(i) * p.get(j))) > 1e-10 {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}
