use super::Graph;
use crate::error::{Error, Result};

pub const INDEPENDENCE_LIMIT: usize = 40;
pub const CHROMATIC_LIMIT: usize = 20;
pub const INTERSECTION_LIMIT: usize = 10;

fn too_large(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::TooLarge { what, size, limit });
    }
    Ok(())
}

/// Vertices sorted by degree, highest first; ties broken by index.
fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// Bitmask adjacency after relabelling by `order` (new index = position).
fn relabelled_masks(g: &Graph, order: &[usize]) -> Vec<u64> {
    let mut pos = vec![0; g.n()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    order
        .iter()
        .map(|&v| g.neighbors(v).fold(0u64, |m, u| m | 1 << pos[u]))
        .collect()
}

struct MisSearch<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: u32,
}

impl MisSearch<'_> {
    /// Greedy partition of `cand` into cliques; the count bounds alpha(cand).
    fn clique_cover_bound(&self, mut cand: u64) -> u32 {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique_cand = cand & self.adj[v];
            cand &= !(1 << v);
            while clique_cand != 0 {
                let u = clique_cand.trailing_zeros() as usize;
                clique_cand &= self.adj[u];
                cand &= !(1 << u);
            }
            cliques += 1;
        }
        cliques
    }

    fn expand(&mut self, cand: u64, current: u64) {
        let size = current.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = current;
            }
            return;
        }
        if size + self.clique_cover_bound(cand) <= self.best_size {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        self.expand(cand & !(1 << v) & !self.adj[v], current | 1 << v);
        self.expand(cand & !(1 << v), current);
    }
}

/// A maximum independent set, found by branch and bound with greedy
/// clique-cover bounds. Vertices are explored in descending degree order.
pub fn maximum_independent_set(g: &Graph) -> Result<Vec<usize>> {
    too_large("vertices", g.n(), INDEPENDENCE_LIMIT)?;
    let order = degree_order(g);
    let adj = relabelled_masks(g, &order);
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut search = MisSearch {
        adj: &adj,
        best: 0,
        best_size: 0,
    };
    search.expand(all, 0);
    let mut set: Vec<usize> = (0..g.n())
        .filter(|&p| search.best >> p & 1 == 1)
        .map(|p| order[p])
        .collect();
    set.sort_unstable();
    Ok(set)
}

pub fn independence_number(g: &Graph) -> Result<usize> {
    Ok(maximum_independent_set(g)?.len())
}

fn colorable(adj: &[u64], k: usize, v: usize, colors: &mut [usize], used: usize) -> bool {
    let n = adj.len();
    if v == n {
        return true;
    }
    // colours 0..used are in play; opening colour `used` breaks the symmetry
    for c in 0..(used + 1).min(k) {
        let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c);
        if !clash {
            colors[v] = c;
            if colorable(adj, k, v + 1, colors, used.max(c + 1)) {
                return true;
            }
        }
    }
    false
}

/// An optimal proper colouring, `colors[v]` in `0..chi`.
pub fn minimum_coloring(g: &Graph) -> Result<Vec<usize>> {
    too_large("vertices", g.n(), CHROMATIC_LIMIT)?;
    let n = g.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let order = degree_order(g);
    let adj = relabelled_masks(g, &order);
    for k in 1..=n {
        let mut colors = vec![0; n];
        if colorable(&adj, k, 0, &mut colors, 0) {
            let mut out = vec![0; n];
            for (p, &v) in order.iter().enumerate() {
                out[v] = colors[p];
            }
            return Ok(out);
        }
    }
    unreachable!("n colours always suffice")
}

pub fn chromatic_number(g: &Graph) -> Result<usize> {
    Ok(minimum_coloring(g)?
        .iter()
        .max()
        .map_or(0, |&c| c + 1))
}

/// Minimal intersection representation of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionWitness {
    /// Universe size `m`.
    pub m: usize,
    /// `family[i]` is the non-empty token set of vertex `i`, a subset of `0..m`.
    pub family: Vec<Vec<usize>>,
}

fn maximal_cliques(adj: &[u64]) -> Vec<u64> {
    fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let n = adj.len();
    let mut out = Vec::new();
    bron_kerbosch(adj, 0, (1u64 << n) - 1, 0, &mut out);
    out.sort_unstable();
    out
}

struct CoverSearch<'a> {
    edges: &'a [(usize, usize)],
    /// For each edge, the maximal cliques (as edge masks) that contain it.
    covering: Vec<Vec<(u64, u64)>>,
}

impl CoverSearch<'_> {
    fn search(&self, covered: u64, depth: usize, chosen: &mut Vec<u64>) -> bool {
        let full = if self.edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.edges.len()) - 1
        };
        if covered == full {
            return true;
        }
        if depth == 0 {
            return false;
        }
        // branch on the lowest uncovered edge; some clique in any cover holds it
        let e = (!covered & full).trailing_zeros() as usize;
        for &(clique, edge_mask) in &self.covering[e] {
            chosen.push(clique);
            if self.search(covered | edge_mask, depth - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Exact intersection number with non-empty sets: a minimum edge clique
/// cover plus one private token per isolated vertex.
pub fn intersection_number(g: &Graph) -> Result<IntersectionWitness> {
    too_large("vertices", g.n(), INTERSECTION_LIMIT)?;
    let n = g.n();
    let edges = g.edges();
    let adj: Vec<u64> = (0..n).map(|v| g.neighbor_mask(v)).collect();
    let cliques: Vec<u64> = maximal_cliques(&adj)
        .into_iter()
        .filter(|c| c.count_ones() >= 2)
        .collect();
    let edge_mask_of = |clique: u64| -> u64 {
        edges
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| clique >> i & 1 == 1 && clique >> j & 1 == 1)
            .fold(0u64, |m, (k, _)| m | 1 << k)
    };
    let covering: Vec<Vec<(u64, u64)>> = edges
        .iter()
        .map(|&(i, j)| {
            cliques
                .iter()
                .filter(|&&c| c >> i & 1 == 1 && c >> j & 1 == 1)
                .map(|&c| (c, edge_mask_of(c)))
                .collect()
        })
        .collect();
    let search = CoverSearch {
        edges: &edges,
        covering,
    };
    let mut chosen = Vec::new();
    let mut depth = 0;
    while !search.search(0, depth, &mut chosen) {
        depth += 1;
        chosen.clear();
    }
    let mut family: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, &clique) in chosen.iter().enumerate() {
        for (v, set) in family.iter_mut().enumerate() {
            if clique >> v & 1 == 1 {
                set.push(t);
            }
        }
    }
    let mut m = chosen.len();
    for v in g.isolated_vertices() {
        family[v].push(m);
        m += 1;
    }
    Ok(IntersectionWitness { m, family })
}

/// `alpha(G^{boxtimes r})^{1/r}` for `r = 1..=r_max`; each term is a lower
/// bound on the Shannon capacity.
pub fn shannon_capacity_lower(g: &Graph, r_max: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(r_max);
    let mut power = Graph::complete(1);
    for r in 1..=r_max {
        let size = g.n().checked_pow(r as u32).unwrap_or(usize::MAX);
        too_large("vertices of strong power", size, INDEPENDENCE_LIMIT)?;
        power = power.strong_product(g);
        let a = independence_number(&power)?;
        out.push((a as f64).powf(1.0 / r as f64));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independence_examples() {
        assert_eq!(independence_number(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(independence_number(&Graph::complete(6)).unwrap(), 1);
        assert_eq!(independence_number(&Graph::empty(7)).unwrap(), 7);
        let c5sq = Graph::cycle(5).strong_product(&Graph::cycle(5));
        assert_eq!(independence_number(&c5sq).unwrap(), 5);
        assert!(matches!(
            independence_number(&Graph::empty(41)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn independent_set_is_independent() {
        let g = Graph::cycle(9).strong_product(&Graph::complete(2));
        let s = maximum_independent_set(&g).unwrap();
        assert_eq!(s.len(), 4);
        for &a in &s {
            for &b in &s {
                assert!(a == b || !g.has_edge(a, b));
            }
        }
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(chromatic_number(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::empty(3)).unwrap(), 1);
        let g = Graph::cycle(7).complement();
        let col = minimum_coloring(&g).unwrap();
        for (i, j) in g.edges() {
            assert_ne!(col[i], col[j]);
        }
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_number(&Graph::complete(5)).unwrap().m, 1);
        assert_eq!(intersection_number(&Graph::cycle(5)).unwrap().m, 5);
        assert_eq!(intersection_number(&Graph::empty(4)).unwrap().m, 4);
        assert!(matches!(
            intersection_number(&Graph::empty(11)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn intersection_witness_realises_graph() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 3)]).unwrap();
        let w = intersection_number(&g).unwrap();
        assert_eq!(w.m, 3 + 1);
        assert_eq!(super::super::intersection_graph(&w.family), g);
    }

    #[test]
    fn shannon_lower_sequences() {
        let c5 = shannon_capacity_lower(&Graph::cycle(5), 2).unwrap();
        assert_eq!(c5[0], 2.0);
        assert!((c5[1] - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(shannon_capacity_lower(&Graph::complete(3), 3).unwrap(), vec![1.0; 3]);
        let e3 = shannon_capacity_lower(&Graph::empty(3), 2).unwrap();
        assert!((e3[0] - 3.0).abs() < 1e-12 && (e3[1] - 3.0).abs() < 1e-12);
        assert!(shannon_capacity_lower(&Graph::cycle(5), 3).is_err());
    }
}
