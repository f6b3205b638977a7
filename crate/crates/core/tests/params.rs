mod support;

use ncgraph::graphs::nonisomorphic_graphs;
use ncgraph::numkernel::Tolerance;
use ncgraph::par::Exec;
use ncgraph::params::{bounds_report, graph_bounds_report, Effort, ReportHints};
use ncgraph::random::{random_operator_system, rng_from_seed};

#[test]
fn graph_reports_are_chain_consistent() {
    let tol = Tolerance::default();
    for n in 1..=5 {
        for g in nonisomorphic_graphs(n).unwrap() {
            let r = graph_bounds_report(&g, Effort::Quick, &ReportHints::default(), 0, Exec::default(), &tol)
                .unwrap();
            let e = g.edges();
            assert_eq!(r.independence_number, support::brute_force_alpha(n, &e));
            assert_eq!(r.report.alpha.lower.value, r.independence_number);
            assert!(r.report.chain_consistent(), "{e:?}");
            assert!(r.report.certificates.iter().all(|c| c.is_verified()));
            if let Some(m) = r.intersection_number {
                assert_eq!(m, support::brute_force_intersection_number(n, &e));
            }
        }
    }
}

#[test]
fn random_system_reports_are_chain_consistent() {
    let tol = Tolerance::default();
    let mut rng = rng_from_seed(3);
    for i in 0..6 {
        let n = 2 + i % 2;
        let s = random_operator_system(n, 1 + i % 3, &mut rng).unwrap();
        let r = bounds_report(&s, Effort::Quick, &ReportHints::default(), i as u64, Exec::default(), &tol)
            .unwrap();
        assert!(r.chain_consistent());
        assert!(r.certificates.iter().all(|c| c.is_verified()));
        // S_Phi of the realisation gives gamma <= mn
        assert!(r.gamma.upper_value().is_some_and(|v| v <= 2 * n * n));
    }
}
