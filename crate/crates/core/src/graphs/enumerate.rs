use std::collections::BTreeMap;

use super::Graph;
use crate::error::{Error, Result};

const ENUMERATION_LIMIT: usize = 7;

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = (i.min(j), i.max(j));
    // pairs (a, b) with a < b, row-major
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations_of(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Isomorphism-invariant code: the minimum edge bitmask over relabellings
/// that sort vertices by degree. Two graphs are isomorphic iff codes agree.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n * n.saturating_sub(1) / 2 <= 64, "graph too large for a u64 code");
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        by_degree.entry(g.degree(v)).or_default().push(v);
    }
    let classes: Vec<Vec<Vec<usize>>> = by_degree.values().map(|c| permutations_of(c)).collect();
    let edges = g.edges();
    let mut best = u64::MAX;
    let mut choice = vec![0usize; classes.len()];
    let mut pos = vec![0usize; n];
    loop {
        let mut next = 0;
        for (c, &k) in classes.iter().zip(&choice) {
            for &v in &c[k] {
                pos[v] = next;
                next += 1;
            }
        }
        let code = edges
            .iter()
            .fold(0u64, |m, &(i, j)| m | 1 << pair_index(n, pos[i], pos[j]));
        best = best.min(code);
        // odometer over the per-class permutations
        let mut d = 0;
        loop {
            if d == classes.len() {
                return best;
            }
            choice[d] += 1;
            if choice[d] < classes[d].len() {
                break;
            }
            choice[d] = 0;
            d += 1;
        }
    }
}

/// One representative per isomorphism class of graphs on `n <= 7` vertices,
/// ordered by edge count and then by canonical code.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "vertices",
            size: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut seen: BTreeMap<(usize, u64), Graph> = BTreeMap::new();
    for mask in 0u64..1u64 << pairs.len() {
        let mut g = Graph::empty(n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g.set_edge(i, j, true);
            }
        }
        let key = (mask.count_ones() as usize, canonical_code(&g));
        seen.entry(key).or_insert(g);
    }
    Ok(seen.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (0..=6)
            .map(|n| nonisomorphic_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn code_is_invariant() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
        let perm = [3, 5, 0, 1, 4, 2];
        assert_eq!(canonical_code(&g), canonical_code(&g.permuted(&perm)));
        assert_ne!(canonical_code(&Graph::cycle(6)), canonical_code(&g));
    }
}
