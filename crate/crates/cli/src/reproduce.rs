//! Machine-checked reproduction cases. Each case is a list of claims with an
//! expected value, the computed value and a pinned tolerance.

use std::time::Instant;

use ncgraph::channels::{
    confusability_system, delta_channel, from_classical, QuantumChannel,
};
use ncgraph::graphs::{
    channel_from_sets, chromatic_number, confusability_graph, independence_number,
    intersection_graph, intersection_number, maximum_independent_set, minimum_coloring,
    non_orthogonality_graph, non_orthogonality_graph_proj, nonisomorphic_graphs,
    shannon_capacity_lower, Graph, VectorTuple,
};
use ncgraph::numkernel::{
    from_real, identity, max_abs, numerical_rank, CMatrix, Tolerance,
};
use ncgraph::opsys::{self, graph_system, make_operator_system, scalar_system, sk_system};
use ncgraph::par::map_slice;
use ncgraph::params::{
    check_f_membership, check_h_membership, gamma_at_most_two, graph_bounds_report,
    gram_from_projections, gram_to_projections, iota_certificate, normalize_to_h,
    qinter_certificate, random_h_instance, rank_one_in_subspace, rank_reduction_step,
    verify_beta_certificate, verify_eta_certificate, verify_gamma_certificate,
    verify_independent_set, verify_noncancelling, EtaMode, GramBlockMatrix, RankOneOutcome,
    ReportHints, SearchBudget, TwoDimOutcome,
};
use ncgraph::random::{
    random_classical_channel, random_graph, random_operator_system, random_vector_tuple,
    rng_from_seed,
};
use ncgraph::theta::{
    betabetter_construction, capacity_report, lovasz_theta, CapacityTarget,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{CliError, Settings};

/// How `computed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Exact equality.
    Equal,
    /// `|computed - expected| <= tolerance`.
    Within,
    /// `computed <= expected + tolerance`.
    AtMost,
    /// `computed >= expected - tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub relation: Relation,
    pub expected: Value,
    pub computed: Value,
    pub tolerance: f64,
    pub pass: bool,
}

impl Claim {
    pub fn equal<T: Serialize + PartialEq>(name: &str, expected: T, computed: T) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Equal,
            pass: expected == computed,
            expected: json!(expected),
            computed: json!(computed),
            tolerance: 0.0,
        }
    }

    pub fn within(name: &str, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            relation: Relation::Within,
            pass: (computed - expected).abs() <= tolerance,
            expected: json!(expected),
            computed: json!(computed),
            tolerance,
        }
    }

    pub fn at_most(name: &str, bound: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            relation: Relation::AtMost,
            pass: computed <= bound + tolerance,
            expected: json!(bound),
            computed: json!(computed),
            tolerance,
        }
    }

    pub fn at_least(name: &str, bound: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            relation: Relation::AtLeast,
            pass: computed >= bound - tolerance,
            expected: json!(bound),
            computed: json!(computed),
            tolerance,
        }
    }

    fn holds(name: &str, computed: bool) -> Self {
        Self::equal(name, true, computed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    OutOfScopeNoted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub summary: String,
    pub status: Status,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seconds: Option<f64>,
}

impl CaseReport {
    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub out_of_scope: usize,
}

impl SuiteReport {
    /// Every executed claim passed.
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// What a case body returns: claims plus free-form notes.
#[derive(Debug, Default)]
pub struct Findings {
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

impl Findings {
    fn push(&mut self, c: Claim) {
        self.claims.push(c);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

type Body = fn(&Settings) -> ncgraph::Result<Findings>;

pub struct CaseDef {
    pub id: &'static str,
    pub summary: &'static str,
    pub out_of_scope: bool,
    body: Body,
}

const ANGLE: f64 = 1e-7;
const RESIDUAL: f64 = 1e-10;
const THETA_TOL: f64 = 1e-5;

static CASES: &[CaseDef] = &[
    CaseDef {
        id: "c5",
        summary: "five-cycle: alpha 2, theta sqrt 5, beta at most 3, capacity lower bound sqrt 5",
        out_of_scope: false,
        body: c5,
    },
    CaseDef {
        id: "c6-complement",
        summary: "complement of the six-cycle: chromatic number of the cycle is 2 while gamma exceeds 2",
        out_of_scope: false,
        body: c6_complement,
    },
    CaseDef {
        id: "capacity-chain",
        summary: "alpha <= Theta <= beta <= gamma <= inter on a fixed corpus of graphs and systems",
        out_of_scope: false,
        body: capacity_chain,
    },
    CaseDef {
        id: "classical-lift",
        summary: "the canonical quantum lift of a classical channel has the graph system of its confusability graph",
        out_of_scope: false,
        body: classical_lift,
    },
    CaseDef {
        id: "delta-channel",
        summary: "Delta_x is a channel with S_{Delta_x} = S_{G(x)}, non-cancelling for non-negative vectors",
        out_of_scope: false,
        body: delta_case,
    },
    CaseDef {
        id: "graph-parameters",
        summary: "graph systems carry the graph values: alpha exactly and gamma, beta, inter bounds on all graphs with n <= 6",
        out_of_scope: false,
        body: graph_parameters,
    },
    CaseDef {
        id: "plex-roundtrip",
        summary: "set families give classical channels with the right confusability graph on all graphs with n <= 5",
        out_of_scope: false,
        body: plex_roundtrip,
    },
    CaseDef {
        id: "projection-roundtrip",
        summary: "block Gram matrices and projection tuples with a prescribed non-orthogonality graph convert both ways",
        out_of_scope: false,
        body: projection_roundtrip,
    },
    CaseDef {
        id: "quantum-theta",
        summary: "claims about the quantum Lovasz number and the quantum independence number",
        out_of_scope: true,
        body: quantum_theta,
    },
    CaseDef {
        id: "rank-reduction",
        summary: "one-column rank reduction keeps the block pattern and never raises the rank",
        out_of_scope: false,
        body: rank_reduction,
    },
    CaseDef {
        id: "realize",
        summary: "every operator system in M_2 and M_3 is the confusability system of a channel into M_{mn}",
        out_of_scope: false,
        body: realize_case,
    },
    CaseDef {
        id: "s2-example",
        summary: "S_2: alpha 1, beta 2, inter 3, and gamma of S_2 (x) S_2 at most 8",
        out_of_scope: false,
        body: s2_example,
    },
    CaseDef {
        id: "scalar-2",
        summary: "C I_2: alpha, the capacity lower bound, beta, gamma and inter all equal 2",
        out_of_scope: false,
        body: scalar_two,
    },
    CaseDef {
        id: "separation-k2",
        summary: "S_2 (x) S_4: beta at most 4 while theta is at least 8",
        out_of_scope: false,
        body: separation_k2,
    },
    CaseDef {
        id: "separation-k3",
        summary: "S_3 (x) S_9: beta at most 9 while theta is at least 27",
        out_of_scope: false,
        body: separation_k3,
    },
];

/// All cases, ordered by id.
pub fn cases() -> &'static [CaseDef] {
    CASES
}

pub fn run_case(def: &CaseDef, settings: &Settings) -> CaseReport {
    let start = Instant::now();
    let (claims, notes) = match (def.body)(settings) {
        Ok(f) => (f.claims, f.notes),
        Err(e) => (vec![Claim::equal("ran to completion", "ok".to_string(), e.to_string())], vec![]),
    };
    let status = if claims.iter().any(|c| !c.pass) {
        Status::Fail
    } else if def.out_of_scope {
        Status::OutOfScopeNoted
    } else {
        Status::Pass
    };
    CaseReport {
        id: def.id.into(),
        summary: def.summary.into(),
        status,
        claims,
        notes,
        seconds: settings.timing.then(|| start.elapsed().as_secs_f64()),
    }
}

/// Run one case by id, or every case for `all`. Cases run concurrently
/// when the settings allow it; the output is ordered by id either way.
pub fn run_cases(which: &str, settings: &Settings) -> Result<SuiteReport, CliError> {
    let selected: Vec<&CaseDef> = if which == "all" {
        CASES.iter().collect()
    } else {
        vec![CASES
            .iter()
            .find(|c| c.id == which)
            .ok_or_else(|| CliError::UnknownCase(which.into()))?]
    };
    // nested fan-out is fine: every parallel helper preserves input order
    let mut reports = map_slice(settings.exec, &selected, |c| run_case(c, settings));
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    Ok(SuiteReport {
        total: reports.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        out_of_scope: count(Status::OutOfScopeNoted),
        cases: reports,
    })
}

fn hints(settings: &Settings) -> ReportHints {
    ReportHints {
        budget: settings.budget,
        ..ReportHints::default()
    }
}

fn graphs_up_to(n: usize) -> ncgraph::Result<Vec<Graph>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(nonisomorphic_graphs(k)?);
    }
    Ok(out)
}

fn incidence_vectors(m: usize, family: &[Vec<usize>]) -> ncgraph::Result<VectorTuple> {
    let vectors = family
        .iter()
        .map(|set| {
            let mut v = vec![ncgraph::numkernel::c(0.0, 0.0); m];
            for &t in set {
                v[t] = ncgraph::numkernel::c(1.0, 0.0);
            }
            v
        })
        .collect();
    VectorTuple::new(m, vectors)
}

fn c5(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let g = Graph::cycle(5);
    let r = graph_bounds_report(&g, s.effort, &hints(s), s.seed, s.exec, &s.tol)?;
    f.push(Claim::equal("alpha(C5)", 2, r.independence_number));
    f.push(Claim::equal("certified alpha lower bound of S_G", 2, r.report.alpha.lower.value));
    let theta = lovasz_theta(&g)?;
    f.push(Claim::within("theta(C5)", 5f64.sqrt(), theta, THETA_TOL));
    let beta = r.report.beta.upper_value().unwrap_or(usize::MAX);
    f.push(Claim::at_most("certified beta upper bound", 3.0, beta as f64, 0.0));
    let lower = shannon_capacity_lower(&g, 2)?;
    f.push(Claim::equal("alpha(C5 strong C5)", 5, independence_number(&g.strong_power(2))?));
    f.push(Claim::within(
        "capacity lower bound from the strong square",
        theta,
        lower.iter().copied().fold(0.0, f64::max),
        THETA_TOL,
    ));
    Ok(f)
}

fn c6_complement(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let c6 = Graph::cycle(6);
    let g = c6.complement();
    f.push(Claim::equal("chi(C6)", 2, chromatic_number(&c6)?));
    let infeasible = match gamma_at_most_two(&g) {
        TwoDimOutcome::Infeasible { component } => {
            f.note(format!(
                "complement component {component:?} is not complete bipartite, so no lines in C^2 realise the graph"
            ));
            true
        }
        TwoDimOutcome::Feasible(_) => false,
    };
    f.push(Claim::holds("no representation by lines in C^2 (gamma >= 3)", infeasible));
    let r = graph_bounds_report(&g, s.effort, &hints(s), s.seed, s.exec, &s.tol)?;
    f.push(Claim::at_least("certified gamma lower bound", 3.0, r.report.gamma.lower.value as f64, 0.0));
    f.push(Claim::holds("chain consistent", r.report.chain_consistent()));
    Ok(f)
}

fn capacity_chain(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed);
    let mut targets: Vec<(String, CapacityTarget)> = vec![
        ("C5".into(), CapacityTarget::Graph(Graph::cycle(5))),
        ("C6 complement".into(), CapacityTarget::Graph(Graph::cycle(6).complement())),
        ("K3".into(), CapacityTarget::Graph(Graph::complete(3))),
        ("empty graph on 3".into(), CapacityTarget::Graph(Graph::empty(3))),
        ("path on 4".into(), CapacityTarget::Graph(Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])?)),
        ("S_2".into(), CapacityTarget::System(sk_system(2))),
        ("S_3".into(), CapacityTarget::System(sk_system(3))),
        ("C I_2".into(), CapacityTarget::System(scalar_system(2))),
    ];
    for i in 0..2 {
        targets.push((
            format!("random system {i} in M_3"),
            CapacityTarget::System(random_operator_system(3, 2, &mut rng)?),
        ));
    }
    let reports = map_slice(s.exec, &targets, |(_, t)| {
        capacity_report(t, s.effort, &hints(s), s.seed, s.exec, &s.tol)
    });
    let mut failures = Vec::new();
    for ((name, t), r) in targets.iter().zip(reports) {
        let r = r?;
        for c in r.checks.iter().filter(|c| !c.pass) {
            failures.push(format!("{name}: {}", c.name));
        }
        let lower = r.shannon_lower_best();
        let beta = r.bounds.beta.upper_value().map_or(f64::INFINITY, |b| b as f64);
        if lower > beta + 1e-9 {
            failures.push(format!("{name}: capacity lower bound above beta"));
        }
        if let CapacityTarget::Graph(g) = t {
            let theta = r.theta.value();
            let chi = chromatic_number(&g.complement())? as f64;
            if !(lower <= theta + THETA_TOL && theta <= chi + THETA_TOL) {
                failures.push(format!("{name}: alpha <= theta <= chi(complement) fails"));
            }
        }
    }
    f.push(Claim::equal("targets checked", targets.len(), targets.len()));
    f.push(Claim::equal("chain violations", Vec::<String>::new(), failures));
    Ok(f)
}

fn classical_lift(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed);
    let mut worst: f64 = 0.0;
    let mut not_noncancelling = 0;
    for i in 0..50 {
        let inputs = 2 + i % 4;
        let outputs = 1 + (i / 4) % 5;
        let nc = random_classical_channel(inputs, outputs, 0.4, &mut rng);
        let q = from_classical(&nc)?;
        let sq = confusability_system(&q, &s.tol)?;
        worst = worst.max(sq.max_principal_angle(&graph_system(&confusability_graph(&nc)))?);
        if !verify_noncancelling(&q) {
            not_noncancelling += 1;
        }
    }
    f.push(Claim::at_most("largest angle between S_{N_q} and S_{G_N}", ANGLE, worst, 0.0));
    f.push(Claim::equal("lifts that are not non-cancelling", 0, not_noncancelling));
    Ok(f)
}

fn delta_case(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed);
    let mut worst_angle: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut bad_nc = 0;
    let mut bad_gamma = 0;
    for i in 0..50 {
        let k = 2 + i % 3;
        let n = 2 + i % 5;
        let mut x = random_vector_tuple(k, n, 0.5, &mut rng);
        let nonneg = i % 2 == 0;
        if nonneg {
            let abs = x
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| ncgraph::numkernel::c(z.norm(), 0.0)).collect())
                .collect();
            x = VectorTuple::new(k, abs)?;
        }
        let ch = delta_channel(&x)?;
        worst_trace = worst_trace.max(ch.trace_preservation_error());
        let target = graph_system(&non_orthogonality_graph(&x));
        worst_angle = worst_angle.max(confusability_system(&ch, &s.tol)?.max_principal_angle(&target)?);
        if nonneg && !verify_noncancelling(&ch) {
            bad_nc += 1;
        }
        let cert = verify_gamma_certificate(&target, &ch, &s.tol)?;
        if !(cert.is_verified() && cert.value() == k) {
            bad_gamma += 1;
        }
    }
    f.push(Claim::at_most("trace preservation error", RESIDUAL, worst_trace, 0.0));
    f.push(Claim::at_most("largest angle between S_{Delta_x} and S_{G(x)}", ANGLE, worst_angle, 0.0));
    f.push(Claim::equal("non-negative tuples with a cancelling Delta_x", 0, bad_nc));
    f.push(Claim::equal("gamma <= k certificates that failed", 0, bad_gamma));
    Ok(f)
}

fn graph_parameters(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let graphs = graphs_up_to(6)?;
    let tol = s.tol;
    let results = map_slice(s.exec, &graphs, |g| -> ncgraph::Result<[bool; 4]> {
        let sg = graph_system(g);
        let n = g.n();
        let mis = maximum_independent_set(g)?;
        let alpha = verify_independent_set(&sg, &VectorTuple::standard(n, &mis))?;
        let alpha_ok = alpha.is_verified() && alpha.value() == independence_number(g)?;

        let w = intersection_number(g)?;
        let x = incidence_vectors(w.m, &w.family)?;
        let delta = delta_channel(&x)?;
        let gamma = verify_gamma_certificate(&sg, &delta, &tol)?;
        let iota = iota_certificate(&sg, &delta, &tol)?;
        let gamma_ok = gamma.is_verified() && gamma.value() == w.m && iota.is_verified();

        let colors = minimum_coloring(&g.complement())?;
        let chi = colors.iter().max().map_or(0, |&c| c + 1);
        let y = VectorTuple::standard(chi, &colors);
        let beta = verify_beta_certificate(&sg, &delta_channel(&y)?, &tol)?;
        let beta_ok = beta.is_verified() && beta.value() == chi;

        let chain_ok = alpha.value() <= chi && chi <= w.m.max(chi) && alpha.value() <= w.m;
        Ok([alpha_ok, gamma_ok, beta_ok, chain_ok])
    });
    let mut fails = [0usize; 4];
    for r in results {
        let r = r?;
        for (i, ok) in r.iter().enumerate() {
            if !ok {
                fails[i] += 1;
            }
        }
    }
    f.push(Claim::equal("graphs checked", 208, graphs.len()));
    f.push(Claim::equal("alpha(S_G) != alpha(G) via standard vectors", 0, fails[0]));
    f.push(Claim::equal("Delta_x gamma and inter certificates of value inter(G) that failed", 0, fails[1]));
    f.push(Claim::equal("Delta_x beta certificates of value chi(G^c) that failed", 0, fails[2]));
    f.push(Claim::equal("alpha <= chi(G^c) and alpha <= inter violations", 0, fails[3]));
    Ok(f)
}

fn plex_roundtrip(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let graphs = graphs_up_to(5)?;
    let tol = s.tol;
    let results = map_slice(s.exec, &graphs, |g| -> ncgraph::Result<(bool, bool, f64, bool)> {
        let w = intersection_number(g)?;
        let nc = channel_from_sets(&w.family, w.m)?;
        let plex_ok = confusability_graph(&nc) == *g && nc.outputs() == w.m;
        let inter_ok = intersection_graph(&w.family) == *g;
        let q = from_classical(&nc)?;
        let sg = graph_system(g);
        let angle = confusability_system(&q, &tol)?.max_principal_angle(&sg)?;
        let iota = iota_certificate(&sg, &q, &tol)?;
        Ok((plex_ok, inter_ok, angle, iota.is_verified() && iota.value() == w.m))
    });
    let (mut plex_bad, mut inter_bad, mut worst, mut iota_bad) = (0, 0, 0f64, 0);
    for r in results {
        let (a, b, angle, d) = r?;
        plex_bad += usize::from(!a);
        inter_bad += usize::from(!b);
        worst = worst.max(angle);
        iota_bad += usize::from(!d);
    }
    f.push(Claim::equal("graphs checked", 52, graphs.len()));
    f.push(Claim::equal("set channels with the wrong confusability graph", 0, plex_bad));
    f.push(Claim::equal("families with the wrong intersection graph", 0, inter_bad));
    f.push(Claim::at_most("largest angle between S_{N_q} and S_G", ANGLE, worst, 0.0));
    f.push(Claim::equal("non-cancelling inter certificates that failed", 0, iota_bad));
    Ok(f)
}

fn roundtrip_graphs(seed: u64) -> ncgraph::Result<Vec<Graph>> {
    let mut rng = rng_from_seed(seed);
    let mut out = vec![
        Graph::cycle(5),
        Graph::cycle(6).complement(),
        Graph::complete(3),
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])?,
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])?,
    ];
    for n in [4, 5, 5, 6, 6] {
        out.push(random_graph(n, 0.5, &mut rng));
    }
    Ok(out)
}

fn projection_roundtrip(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed);
    let tol = s.tol;
    let mut failures = Vec::new();
    let mut checked = 0;
    for (gi, g) in roundtrip_graphs(s.seed)?.iter().enumerate() {
        for rep in 0..3 {
            let t: Vec<usize> = (0..g.n()).map(|i| 1 + (i + rep) % 2).collect();
            let b = random_h_instance(g, &t, &mut rng)?;
            checked += 1;
            let tag = format!("graph {gi}, t = {t:?}");
            if let Err(e) = check_h_membership(&b, g, &tol) {
                failures.push(format!("{tag}: sample not in H: {e}"));
                continue;
            }
            let k = b.rank(&tol);
            let p = match gram_to_projections(&b, g, &tol) {
                Ok(p) => p,
                Err(e) => {
                    failures.push(format!("{tag}: {e}"));
                    continue;
                }
            };
            if p.k() != k || p.ranks() != t.as_slice() || non_orthogonality_graph_proj(&p) != *g {
                failures.push(format!("{tag}: projections have the wrong shape or graph"));
            }
            if !qinter_certificate(g, &p).is_verified() {
                failures.push(format!("{tag}: quantum intersection certificate failed"));
            }
            let back = gram_from_projections(&p, &tol);
            if check_h_membership(&back, g, &tol).is_err() || back.rank(&tol) != k {
                failures.push(format!("{tag}: Gram matrix of the projections is not in H with rank {k}"));
            }
            // scale the blocks: F membership is kept and normalisation restores H
            let mut scale = vec![];
            for (i, &ti) in t.iter().enumerate() {
                for _ in 0..ti {
                    scale.push(1.0 + 0.5 * i as f64);
                }
            }
            let d = ncgraph::numkernel::diag_real(&scale);
            let fb = GramBlockMatrix::new(t.clone(), &d * b.data() * &d, &tol)?;
            let ok = check_f_membership(&fb, g, &tol).is_ok()
                && normalize_to_h(&fb, g, &tol).is_ok_and(|h| check_h_membership(&h, g, &tol).is_ok() && h.rank(&tol) == k);
            if !ok {
                failures.push(format!("{tag}: normalisation from F to H failed"));
            }
        }
    }
    f.push(Claim::equal("instances checked", 30, checked));
    f.push(Claim::equal("round-trip failures", Vec::<String>::new(), failures));
    Ok(f)
}

fn quantum_theta(_: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    f.note("the quantum Lovasz number of C I_2 is 4, so inter(C I_2) = 2 lies strictly below it: not computed here");
    f.note("the quantum Lovasz number of S_2 is 2 while Theta(S_2) = 1: not computed here");
    f.note("for graph systems the quantum Lovasz number equals theta(G): only theta(G) is computed");
    f.note("the quantum independence number alpha_q and the bounds built on it are not implemented");
    Ok(f)
}

fn rank_reduction(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed.wrapping_add(1));
    let tol = s.tol;
    let mut steps = 0;
    let mut failures = Vec::new();
    for (gi, g) in roundtrip_graphs(s.seed)?.iter().enumerate() {
        let t: Vec<usize> = (0..g.n()).map(|i| 1 + (i + gi) % 3).collect();
        let mut b = random_h_instance(g, &t, &mut rng)?;
        let mut rank = b.rank(&tol);
        let mut sizes = t.clone();
        while let Some(i) = sizes.iter().position(|&x| x >= 2) {
            let next = match rank_reduction_step(&b, g, i, &tol) {
                Ok(n) => n,
                Err(e) => {
                    failures.push(format!("graph {gi}: {e}"));
                    break;
                }
            };
            steps += 1;
            sizes[i] -= 1;
            let r = next.rank(&tol);
            if next.block_sizes() != sizes.as_slice() {
                failures.push(format!("graph {gi}: wrong block sizes"));
            }
            if check_f_membership(&next, g, &tol).is_err() {
                failures.push(format!("graph {gi}: step left F"));
            }
            if r > rank {
                failures.push(format!("graph {gi}: rank rose from {rank} to {r}"));
            }
            rank = r;
            b = normalize_to_h(&next, g, &tol)?;
        }
        if sizes.iter().all(|&x| x == 1) {
            let p = gram_to_projections(&b, g, &tol)?;
            if !qinter_certificate(g, &p).is_verified() {
                failures.push(format!("graph {gi}: final rank-one projections do not realise G"));
            }
        }
    }
    f.push(Claim::at_least("reduction steps taken", 10.0, steps as f64, 0.0));
    f.push(Claim::equal("postcondition failures", Vec::<String>::new(), failures));
    Ok(f)
}

fn realize_case(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let mut rng = rng_from_seed(s.seed);
    let mut worst: f64 = 0.0;
    let mut too_big = 0;
    let mut count = 0;
    for n in [2usize, 3] {
        for i in 0..50 {
            let gens = 1 + i % (n * n - 1);
            let sys = random_operator_system(n, gens, &mut rng)?;
            let ch = ncgraph::channels::realize(&sys, &s.tol)?;
            let sp = confusability_system(&ch, &s.tol)?;
            worst = worst.max(sp.max_principal_angle(&sys)?);
            if ch.k() > 2 * n * n || ch.trace_preservation_error() > RESIDUAL {
                too_big += 1;
            }
            count += 1;
        }
    }
    f.push(Claim::equal("systems realised", 100, count));
    f.push(Claim::at_most("largest angle between S_Phi and S", ANGLE, worst, 0.0));
    f.push(Claim::equal("channels with output above 2 n^2 or not trace preserving", 0, too_big));
    Ok(f)
}

/// The pair of 3 x 2 Kraus operators realising `S_2`.
pub fn s2_kraus_pair() -> ncgraph::Result<QuantumChannel> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a1 = from_real(3, 2, &[r, 0.0, 0.0, 0.0, 0.0, r]);
    let a2 = from_real(3, 2, &[0.0, 0.0, 0.0, r, r, 0.0]);
    QuantumChannel::new(2, 3, vec![a1, a2])
}

/// `W = [V_1 V_2 V_3 V_4] / 2` in `M_{8,16}`, built from coordinate isometries.
pub fn s2_square_w() -> CMatrix {
    let cols: [[usize; 4]; 4] = [[1, 2, 3, 4], [2, 5, 4, 6], [3, 4, 7, 8], [6, 7, 5, 1]];
    let mut w = CMatrix::zeros(8, 16);
    for (b, v) in cols.iter().enumerate() {
        for (j, &e) in v.iter().enumerate() {
            w[(e - 1, 4 * b + j)] = ncgraph::numkernel::c(0.5, 0.0);
        }
    }
    w
}

fn s2_example(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let tol = s.tol;
    let s2 = sk_system(2);
    let ch = s2_kraus_pair()?;
    f.push(Claim::at_most("trace preservation error", RESIDUAL, ch.trace_preservation_error(), 0.0));
    let sp = confusability_system(&ch, &tol)?;
    f.push(Claim::equal("dim S_Phi", 3, sp.dim()));
    f.push(Claim::at_most("angle between S_Phi and S_2", ANGLE, sp.max_principal_angle(&s2)?, 0.0));
    f.push(Claim::holds("non-cancelling", verify_noncancelling(&ch)));
    let iota = iota_certificate(&s2, &ch, &tol)?;
    f.push(Claim::holds("inter <= 3 certificate verified", iota.is_verified() && iota.value() == 3));

    let exact_alpha_one = matches!(
        rank_one_in_subspace(&s2.perp(), s.seed, &SearchBudget::default())?,
        RankOneOutcome::NotFound { exact: true, .. }
    );
    f.push(Claim::holds("no rank-one operator in the perp (alpha = 1)", exact_alpha_one));
    let beta2 = verify_beta_certificate(&s2, &ncgraph::channels::identity_channel(2), &tol)?;
    f.push(Claim::holds("beta <= 2 certificate verified", beta2.is_verified() && beta2.value() == 2));
    f.push(Claim::holds("S_2 is not M_2 (beta != 1)", s2.dim() < 4));

    let w = s2_square_w();
    let gram = w.adjoint() * &w;
    f.push(Claim::equal("rank(W*W)", 8, numerical_rank(&gram, &Tolerance::new(1e-8, tol.psd_abs, tol.subspace_angle)?)));
    let blocks: Vec<CMatrix> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| gram.view((4 * i, 4 * j), (4, 4)).into_owned())
        .collect();
    let span = make_operator_system(4, &blocks, &tol)?;
    let square = opsys::tensor(&s2, &s2);
    f.push(Claim::equal("dim of the block span", 9, span.dim()));
    f.push(Claim::at_most("angle between the block span and S_2 (x) S_2", ANGLE, span.max_principal_angle(&square)?, 0.0));
    let mut diag = -identity(4);
    for i in 0..4 {
        diag += &blocks[5 * i];
    }
    f.push(Claim::at_most("residual of sum_i B_ii = I_4", RESIDUAL, max_abs(&diag), 0.0));
    let cert = verify_eta_certificate(&square, &GramBlockMatrix::uniform(4, gram, &tol)?, EtaMode::Gamma, &tol)?;
    f.push(Claim::holds("gamma(S_2 (x) S_2) <= 8 certificate verified", cert.is_verified() && cert.value() == 8));
    f.push(Claim::at_most("gamma(S_2 (x) S_2) upper bound below 9", 8.0, cert.value() as f64, 0.0));
    f.note("gamma(S_2) = 3 rests on a hand argument ruling out two-dimensional outputs; only the upper bound is certified");
    f.note("Theta(S_2) = 1 rests on alpha(S_2 (x) T) = 1 for every T with alpha(T) = 1, which is not a finite computation");
    Ok(f)
}

fn scalar_two(s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let r = capacity_report(
        &CapacityTarget::System(scalar_system(2)),
        s.effort,
        &hints(s),
        s.seed,
        s.exec,
        &s.tol,
    )?;
    f.push(Claim::equal("alpha lower bound", 2, r.alpha.lower.value));
    f.push(Claim::within("capacity lower bound", 2.0, r.shannon_lower_best(), 1e-12));
    for iv in r.bounds.intervals() {
        let name = format!("{} interval", iv.parameter.name());
        f.push(Claim::equal(&name, (2, Some(2)), (iv.lower.value, iv.upper_value())));
    }
    let refs: Vec<String> = r
        .bounds
        .intervals()
        .iter()
        .filter_map(|iv| iv.upper.as_ref().map(|b| b.witness_ref.clone()))
        .collect();
    f.push(Claim::equal("upper bounds with a witness reference", 4, refs.len()));
    f.push(Claim::holds("capacity checks", r.passed()));
    Ok(f)
}

fn separation(k: usize, s: &Settings) -> ncgraph::Result<Findings> {
    let mut f = Findings::default();
    let r = betabetter_construction(k, &s.tol)?;
    for c in &r.checks {
        f.push(Claim::at_most(c.name, RESIDUAL, c.residual, 0.0));
    }
    f.push(Claim::holds("beta certificate verified", r.beta.is_verified()));
    f.push(Claim::equal("beta certificate value", k * k, r.beta.value()));
    let kk = (k * k * k) as f64;
    f.push(Claim::within("theta witness value", kk, r.theta.value(), 1e-9));
    let perp = r.system.perp_residual(r.theta.k())?;
    f.push(Claim::at_most("theta witness perp residual", RESIDUAL, perp, 0.0));
    f.push(Claim::holds("beta upper bound < theta lower bound", r.separated()));
    Ok(f)
}

fn separation_k2(s: &Settings) -> ncgraph::Result<Findings> {
    separation(2, s)
}

fn separation_k3(s: &Settings) -> ncgraph::Result<Findings> {
    separation(3, s)
}
