mod support;

use ncgraph::graphs::{
    channel_from_sets, chromatic_number, confusability_graph, independence_number,
    intersection_graph, intersection_number, nonisomorphic_graphs, Graph,
};
use ncgraph::random::{random_graph, rng_from_seed};

fn small_graphs(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| nonisomorphic_graphs(n).unwrap()).collect()
}

#[test]
fn enumeration_matches_oracle() {
    for n in 1..=5 {
        assert_eq!(
            nonisomorphic_graphs(n).unwrap().len(),
            support::all_graphs_up_to_iso(n).len(),
            "n = {n}"
        );
    }
    assert_eq!(nonisomorphic_graphs(6).unwrap().len(), 156);
}

#[test]
fn exact_invariants_match_brute_force() {
    for g in small_graphs(6) {
        let (n, e) = (g.n(), g.edges());
        assert_eq!(independence_number(&g).unwrap(), support::brute_force_alpha(n, &e), "{e:?}");
        assert_eq!(chromatic_number(&g).unwrap(), support::brute_force_chromatic(n, &e), "{e:?}");
    }
}

#[test]
fn intersection_number_matches_brute_force() {
    for g in small_graphs(5) {
        let w = intersection_number(&g).unwrap();
        assert_eq!(w.m, support::brute_force_intersection_number(g.n(), &g.edges()));
        assert_eq!(intersection_graph(&w.family), g);
    }
    let mut rng = rng_from_seed(7);
    for _ in 0..20 {
        let g = random_graph(6, 0.5, &mut rng);
        let w = intersection_number(&g).unwrap();
        assert_eq!(w.m, support::brute_force_intersection_number(6, &g.edges()), "{:?}", g.edges());
    }
}

#[test]
fn set_channels_round_trip() {
    for g in small_graphs(5) {
        let w = intersection_number(&g).unwrap();
        let ch = channel_from_sets(&w.family, w.m).unwrap();
        assert_eq!(confusability_graph(&ch), g);
    }
}

#[test]
fn strong_square_of_c5() {
    let sq = Graph::cycle(5).strong_power(2);
    assert_eq!(sq.n(), 25);
    assert_eq!(independence_number(&sq).unwrap(), 5);
    assert_eq!(support::branching_alpha(25, &sq.edges()), 5);
}
