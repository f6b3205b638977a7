use std::f64::consts::PI;

use super::verify::qinter_certificate;
use super::ParamCertificate;
use crate::channels::ProjectionTuple;
use crate::graphs::{Graph, VectorTuple};
use crate::numkernel::c;

/// Exact answer to "does `G` have a projection representation in `C^2`?".
#[derive(Debug, Clone, PartialEq)]
pub enum TwoDimOutcome {
    /// A verified representation in `M_2`.
    Feasible(ParamCertificate),
    /// No representation exists; `component` lists the vertices of a
    /// component of the complement that is not complete bipartite.
    Infeasible { component: Vec<usize> },
}

/// Decide `gamma(G) <= 2`.
///
/// In `C^2` a line has exactly one orthogonal line, so the orthogonality
/// graph of any representation is a disjoint union of complete bipartite
/// graphs (a rank-two projection is orthogonal to nothing). Conversely each
/// such component can be placed on its own pair of perpendicular lines.
pub fn gamma_at_most_two(g: &Graph) -> TwoDimOutcome {
    let n = g.n();
    let gc = g.complement();
    let mut side = vec![usize::MAX; n];
    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        comp[start] = n_comp;
        side[start] = 0;
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for w in gc.neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = n_comp;
                    side[w] = 1 - side[v];
                    members.push(w);
                }
            }
        }
        let complete_bipartite = members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| a == b || gc.has_edge(a, b) == (side[a] != side[b]))
        });
        if !complete_bipartite {
            members.sort_unstable();
            return TwoDimOutcome::Infeasible { component: members };
        }
        n_comp += 1;
    }
    let vectors = (0..n)
        .map(|v| {
            let theta = comp[v] as f64 * PI / (4.0 * n_comp.max(1) as f64);
            let (s, co) = theta.sin_cos();
            if side[v] == 0 {
                vec![c(co, 0.0), c(s, 0.0)]
            } else {
                vec![c(-s, 0.0), c(co, 0.0)]
            }
        })
        .collect();
    let x = VectorTuple::new(2, vectors).expect("unit vectors");
    let p = ProjectionTuple::from_vectors(&x);
    TwoDimOutcome::Feasible(qinter_certificate(g, &p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for g in [Graph::cycle(4), Graph::complete(3), Graph::empty(2)] {
            match gamma_at_most_two(&g) {
                TwoDimOutcome::Feasible(cert) => assert!(cert.is_verified(), "{g:?}"),
                other => panic!("{other:?}"),
            }
        }
        // C6 complement is the triangular prism
        let c6c = Graph::cycle(6).complement();
        assert!(matches!(
            gamma_at_most_two(&c6c),
            TwoDimOutcome::Infeasible { .. }
        ));
        assert!(matches!(
            gamma_at_most_two(&Graph::empty(3)),
            TwoDimOutcome::Infeasible { .. }
        ));
        assert!(matches!(
            gamma_at_most_two(&Graph::cycle(5)),
            TwoDimOutcome::Infeasible { .. }
        ));
    }
}
