mod support;

use approx::assert_abs_diff_eq;
use ncgraph::graphs::{nonisomorphic_graphs, Graph};
use ncgraph::numkernel::Tolerance;
use ncgraph::opsys::graph_system;
use ncgraph::theta::{graph_theta_witness, lovasz_theta, lovasz_theta_sdp, verify_theta_witness};

#[test]
fn odd_cycles_have_closed_form() {
    for n in [3, 5, 7, 9] {
        let t = lovasz_theta(&Graph::cycle(n)).unwrap();
        assert_abs_diff_eq!(t, support::odd_cycle_theta(n), epsilon = 1e-6);
    }
}

#[test]
fn complete_and_empty() {
    for n in 1..6 {
        assert_abs_diff_eq!(lovasz_theta(&Graph::complete(n)).unwrap(), 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(lovasz_theta(&Graph::empty(n)).unwrap(), n as f64, epsilon = 1e-6);
    }
}

#[test]
fn sandwich_up_to_six_vertices() {
    for n in 1..=6 {
        for g in nonisomorphic_graphs(n).unwrap() {
            let e = g.edges();
            let alpha = support::brute_force_alpha(n, &e) as f64;
            let chi_c = support::brute_force_chromatic(n, &g.complement().edges()) as f64;
            let t = lovasz_theta(&g).unwrap();
            assert!(alpha <= t + 1e-6 && t <= chi_c + 1e-6, "{e:?}: {alpha} {t} {chi_c}");
        }
    }
}

#[test]
fn witnesses_replay() {
    let tol = Tolerance::default();
    for g in nonisomorphic_graphs(5).unwrap() {
        let sol = lovasz_theta_sdp(&g).unwrap();
        let w = graph_theta_witness(&g, &sol, &tol).unwrap();
        let again = verify_theta_witness(&graph_system(&g), w.k(), &tol).unwrap();
        assert_abs_diff_eq!(again.value(), sol.value, epsilon = 1e-6);
    }
}
