use serde::{Deserialize, Serialize};

use super::search::{
    alpha_search, kraus_search, qinter_search, rank_one_in_subspace, KrausMode, RankOneOutcome,
    SearchBudget, SearchOutcome,
};
use super::two_dim::{gamma_at_most_two, TwoDimOutcome};
use super::verify::{
    iota_certificate, verify_beta_certificate, verify_gamma_certificate, verify_independent_set,
};
use super::{CertificateJson, ParamCertificate, Parameter, Witness};
use crate::channels::{
    delta_channel, from_classical, identity_channel, realize, trace_channel, QuantumChannel,
};
use crate::error::Result;
use crate::graphs::{
    channel_from_sets, intersection_number, maximum_independent_set, minimum_coloring, Graph,
    VectorTuple, CHROMATIC_LIMIT, INTERSECTION_LIMIT,
};
use crate::numkernel::{range_basis, svd_sorted, Tolerance};
use crate::opsys::{graph_system, OperatorSystem};
use crate::par::Exec;

/// How much search a report may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Effort {
    Quick,
    Full,
}

impl Effort {
    pub fn budget(self, exec: Exec) -> SearchBudget {
        match self {
            Effort::Quick => SearchBudget::new(4, 1500),
            Effort::Full => SearchBudget::new(12, 4000),
        }
        .with_exec(exec)
    }

    /// How many output dimensions above the current lower bound a Kraus
    /// search will try.
    fn search_span(self) -> usize {
        match self {
            Effort::Quick => 1,
            Effort::Full => 3,
        }
    }

    /// Default cap on the number of Kraus operators a search may use.
    pub fn kraus_cap(self) -> usize {
        match self {
            Effort::Quick => 4,
            Effort::Full => 8,
        }
    }
}

/// One end of an interval and where it came from.
///
/// `witness_ref` is `cert#i` (an index into the report's certificates),
/// `chain:<param>` (inherited from a neighbour in the chain), `exact:<why>`
/// or `trivial:<why>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: usize,
    pub witness_ref: String,
}

/// Certified interval for one parameter. `upper` is `None` when no finite
/// upper bound was certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub parameter: Parameter,
    pub lower: Bound,
    pub upper: Option<Bound>,
    pub exact: bool,
    pub notes: Vec<String>,
}

impl Interval {
    fn new(parameter: Parameter) -> Self {
        Self {
            parameter,
            lower: Bound {
                value: 1,
                witness_ref: "trivial:positive".into(),
            },
            upper: None,
            exact: false,
            notes: Vec::new(),
        }
    }

    fn offer_lower(&mut self, value: usize, witness_ref: impl Into<String>) {
        if value > self.lower.value {
            self.lower = Bound {
                value,
                witness_ref: witness_ref.into(),
            };
        }
    }

    fn offer_upper(&mut self, value: usize, witness_ref: impl Into<String>) {
        if self.upper.as_ref().is_none_or(|u| value < u.value) {
            self.upper = Some(Bound {
                value,
                witness_ref: witness_ref.into(),
            });
        }
    }

    pub fn upper_value(&self) -> Option<usize> {
        self.upper.as_ref().map(|b| b.value)
    }
}

/// Optional witnesses supplied by the caller; each is verified before use.
#[derive(Debug, Clone, Default)]
pub struct ReportHints {
    pub independent_sets: Vec<VectorTuple>,
    pub channels: Vec<QuantumChannel>,
    /// Overrides [`Effort::kraus_cap`].
    pub max_kraus: Option<usize>,
    /// Overrides [`Effort::budget`].
    pub budget: Option<SearchBudget>,
}

/// Certified intervals for alpha, beta, gamma and the intersection number.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: usize,
    pub dim: usize,
    pub alpha: Interval,
    pub beta: Interval,
    pub gamma: Interval,
    pub inter: Interval,
    pub certificates: Vec<ParamCertificate>,
}

impl BoundsReport {
    pub fn intervals(&self) -> [&Interval; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.inter]
    }

    /// `lower(alpha) <= upper(beta) <= upper(gamma) <= upper(inter)`, with a
    /// missing upper bound read as infinity, and every interval non-empty.
    pub fn chain_consistent(&self) -> bool {
        let inf = usize::MAX;
        let up = |i: &Interval| i.upper_value().unwrap_or(inf);
        self.intervals()
            .iter()
            .all(|i| i.lower.value <= up(i))
            && self.alpha.lower.value <= up(&self.beta)
            && up(&self.beta) <= up(&self.gamma)
            && up(&self.gamma) <= up(&self.inter)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "dim": self.dim,
            "intervals": self.intervals(),
            "certificates": self
                .certificates
                .iter()
                .map(CertificateJson::from)
                .collect::<Vec<_>>(),
        })
    }
}

struct Builder {
    intervals: [Interval; 4],
    certificates: Vec<ParamCertificate>,
}

fn slot(p: Parameter) -> usize {
    match p {
        Parameter::Alpha => 0,
        Parameter::Beta => 1,
        Parameter::Gamma | Parameter::Qinter => 2,
        Parameter::Inter => 3,
    }
}

impl Builder {
    fn new() -> Self {
        Self {
            intervals: [
                Interval::new(Parameter::Alpha),
                Interval::new(Parameter::Beta),
                Interval::new(Parameter::Gamma),
                Interval::new(Parameter::Inter),
            ],
            certificates: Vec::new(),
        }
    }

    fn get(&mut self, p: Parameter) -> &mut Interval {
        &mut self.intervals[slot(p)]
    }

    /// Record a verified certificate; failed ones are dropped.
    fn add(&mut self, cert: ParamCertificate) -> bool {
        if !cert.is_verified() {
            return false;
        }
        let r = format!("cert#{}", self.certificates.len());
        let v = cert.value();
        let p = cert.parameter();
        match cert.direction() {
            super::Direction::Lower => self.get(p).offer_lower(v, r),
            super::Direction::Upper => self.get(p).offer_upper(v, r),
        }
        self.certificates.push(cert);
        true
    }

    fn lower(&self, p: Parameter) -> usize {
        // chain-effective lower bound
        self.intervals[..=slot(p)]
            .iter()
            .map(|i| i.lower.value)
            .max()
            .unwrap_or(1)
    }

    fn upper(&self, p: Parameter) -> Option<usize> {
        self.intervals[slot(p)..]
            .iter()
            .filter_map(Interval::upper_value)
            .min()
    }

    fn try_channel(&mut self, s: &OperatorSystem, ch: &QuantumChannel, tol: &Tolerance) -> Result<()> {
        if ch.n() != s.n() {
            return Ok(());
        }
        self.add(verify_beta_certificate(s, ch, tol)?);
        if self.add(verify_gamma_certificate(s, ch, tol)?) {
            self.add(iota_certificate(s, ch, tol)?);
        }
        Ok(())
    }

    fn finish(mut self, n: usize, dim: usize) -> BoundsReport {
        let names = ["alpha", "beta", "gamma", "inter"];
        for i in 1..4 {
            let prev = self.intervals[i - 1].lower.value;
            self.intervals[i].offer_lower(prev, format!("chain:{}", names[i - 1]));
        }
        for i in (0..3).rev() {
            if let Some(next) = self.intervals[i + 1].upper_value() {
                self.intervals[i].offer_upper(next, format!("chain:{}", names[i + 1]));
            }
        }
        for iv in &mut self.intervals {
            iv.exact = iv.upper_value() == Some(iv.lower.value);
        }
        let [alpha, beta, gamma, inter] = self.intervals;
        BoundsReport {
            n,
            dim,
            alpha,
            beta,
            gamma,
            inter,
            certificates: self.certificates,
        }
    }
}

fn pair_from_rank_one(m: &crate::numkernel::CMatrix) -> Result<VectorTuple> {
    let (u, _, v) = svd_sorted(m);
    VectorTuple::new(
        m.nrows(),
        vec![
            u.column(0).iter().copied().collect(),
            v.column(0).iter().copied().collect(),
        ],
    )
}

/// Certified bounds for an operator system. Lower bounds on alpha come from
/// rank-one and independent-set searches (exact in `M_2`), upper bounds from
/// verified channels: the identity and trace channels, the realising channel
/// and seeded Kraus searches. Every interval is clipped against its
/// neighbours in `alpha <= beta <= gamma <= inter`.
pub fn bounds_report(
    s: &OperatorSystem,
    effort: Effort,
    hints: &ReportHints,
    seed: u64,
    exec: Exec,
    tol: &Tolerance,
) -> Result<BoundsReport> {
    let n = s.n();
    let d = s.dim();
    let budget = hints.budget.unwrap_or(effort.budget(exec));
    let cap = hints.max_kraus.unwrap_or(effort.kraus_cap()).max(1);
    let mut b = Builder::new();

    // alpha
    b.get(Parameter::Alpha)
        .offer_upper(n, "trivial:independent vectors are orthogonal");
    for x in &hints.independent_sets {
        if x.k() == n {
            b.add(verify_independent_set(s, x)?);
        }
    }
    match rank_one_in_subspace(&s.perp(), seed, &budget)? {
        RankOneOutcome::Found(m) => {
            b.add(verify_independent_set(s, &pair_from_rank_one(&m)?)?);
        }
        RankOneOutcome::NotFound { exact: true, .. } => {
            b.get(Parameter::Alpha)
                .offer_upper(1, "exact:no rank-one element in the perp");
        }
        RankOneOutcome::NotFound { .. } => b
            .get(Parameter::Alpha)
            .notes
            .push(format!("no rank-one element found in the perp ({} starts)", budget.starts)),
    }
    if b.lower(Parameter::Alpha) >= 2 {
        for m in 3..=n {
            if b.lower(Parameter::Alpha) >= m {
                continue;
            }
            match alpha_search(s, m, seed, &budget)? {
                SearchOutcome::Found(c) => {
                    b.add(c);
                }
                SearchOutcome::NotFound { starts, max_iter } => {
                    b.get(Parameter::Alpha).notes.push(format!(
                        "no independent set of size {m} found ({starts} starts, {max_iter} iterations)"
                    ));
                    break;
                }
            }
        }
    }

    // fixed channels
    if d < n * n {
        b.get(Parameter::Beta)
            .offer_lower(2, "trivial:not the full matrix algebra");
    }
    b.try_channel(s, &identity_channel(n), tol)?;
    b.try_channel(s, &trace_channel(n), tol)?;
    for ch in &hints.channels {
        b.try_channel(s, ch, tol)?;
    }
    let realized = realize(s, tol)?;
    b.try_channel(s, &realized, tol)?;

    // beta: Kraus searches below the current upper bound
    let span = effort.search_span();
    let lo = b.lower(Parameter::Beta);
    for k in lo..lo + span {
        if b.upper(Parameter::Beta).is_some_and(|u| k >= u) {
            break;
        }
        if let SearchOutcome::Found(c) =
            kraus_search(s, k, k.min(cap), KrausMode::Contain, false, seed, &budget, tol)?
        {
            b.add(c);
            break;
        }
    }

    // gamma and inter: need at least ceil(sqrt(dim)) Kraus operators
    let m0 = ((d as f64).sqrt().ceil() as usize).max(1);
    let kraus_counts: Vec<usize> = match effort {
        Effort::Quick => vec![m0],
        Effort::Full => vec![m0, m0 + 1],
    };
    let kraus_counts: Vec<usize> = kraus_counts.into_iter().filter(|&m| m <= cap.max(m0)).collect();
    let lo = b.lower(Parameter::Gamma);
    'gamma: for k in lo..lo + span {
        if b.upper(Parameter::Gamma).is_some_and(|u| k >= u) {
            break;
        }
        for &m in &kraus_counts {
            if let SearchOutcome::Found(c) =
                kraus_search(s, k, m, KrausMode::Equal, false, seed, &budget, tol)?
            {
                let ch = c.channel().cloned();
                b.add(c);
                if let Some(ch) = ch {
                    b.add(iota_certificate(s, &ch, tol)?);
                }
                break 'gamma;
            }
        }
    }
    let lo = b.lower(Parameter::Inter);
    'inter: for k in lo..lo + span + 1 {
        if b.intervals[3].upper_value().is_some_and(|u| k >= u) {
            break;
        }
        for &m in &kraus_counts {
            if let SearchOutcome::Found(c) =
                kraus_search(s, k, m, KrausMode::Equal, true, seed, &budget, tol)?
            {
                b.add(c);
                break 'inter;
            }
        }
    }
    if b.intervals[3].upper.is_none() {
        b.get(Parameter::Inter)
            .notes
            .push("no non-cancelling channel found".into());
    }
    b.get(Parameter::Inter)
        .notes
        .push("certificates bound the infimum from above; attainment is not claimed".into());
    Ok(b.finish(n, d))
}

/// Bounds for the graph system `S_G`, plus the exact graph invariants used.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphBoundsReport {
    pub report: BoundsReport,
    pub independence_number: usize,
    /// Chromatic number of the complement, when small enough to compute.
    pub complement_chromatic_number: Option<usize>,
    /// Intersection number, when small enough to compute.
    pub intersection_number: Option<usize>,
    /// Whether a representation by lines in `C^2` exists.
    pub two_dim_feasible: bool,
}

impl GraphBoundsReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "report": self.report.to_json(),
            "independence_number": self.independence_number,
            "complement_chromatic_number": self.complement_chromatic_number,
            "intersection_number": self.intersection_number,
            "two_dim_feasible": self.two_dim_feasible,
        })
    }
}

fn projection_vectors(cert: &ParamCertificate, tol: &Tolerance) -> Option<VectorTuple> {
    let Witness::Projections(p) = cert.witness() else {
        return None;
    };
    if p.ranks().iter().any(|&r| r != 1) {
        return None;
    }
    let vectors = p
        .projections()
        .iter()
        .map(|m| range_basis(m, tol).column(0).iter().copied().collect())
        .collect();
    VectorTuple::new(p.k(), vectors).ok()
}

/// Certified bounds for `S_G`. Alpha is exact (maximum independent set with
/// standard-basis witnesses); beta is bounded by a colouring of the
/// complement, gamma by vector representations (with an exact test for
/// dimension two) and the intersection number by a minimum edge clique cover.
pub fn graph_bounds_report(
    g: &Graph,
    effort: Effort,
    hints: &ReportHints,
    seed: u64,
    exec: Exec,
    tol: &Tolerance,
) -> Result<GraphBoundsReport> {
    let n = g.n();
    let s = graph_system(g);
    let budget = hints.budget.unwrap_or(effort.budget(exec));
    let mut b = Builder::new();

    let mis = maximum_independent_set(g)?;
    let alpha = mis.len();
    b.add(verify_independent_set(&s, &VectorTuple::standard(n, &mis))?);
    b.get(Parameter::Alpha)
        .offer_upper(alpha, "exact:maximum independent set");

    if !g.is_complete() {
        b.get(Parameter::Beta)
            .offer_lower(2, "trivial:not the full matrix algebra");
    }
    b.try_channel(&s, &identity_channel(n), tol)?;
    b.try_channel(&s, &trace_channel(n), tol)?;
    for ch in &hints.channels {
        b.try_channel(&s, ch, tol)?;
    }
    for x in &hints.independent_sets {
        if x.k() == n {
            b.add(verify_independent_set(&s, x)?);
        }
    }

    let gc = g.complement();
    let mut chi = None;
    if n <= CHROMATIC_LIMIT {
        let colors = minimum_coloring(&gc)?;
        let k = colors.iter().max().map_or(1, |&c| c + 1);
        chi = Some(k);
        let x = VectorTuple::standard(k, &colors);
        if let Ok(ch) = delta_channel(&x) {
            b.add(verify_beta_certificate(&s, &ch, tol)?);
        }
    }

    let mut inter = None;
    if n <= INTERSECTION_LIMIT {
        let w = intersection_number(g)?;
        inter = Some(w.m);
        let ch = from_classical(&channel_from_sets(&w.family, w.m)?)?;
        b.add(iota_certificate(&s, &ch, tol)?);
        b.add(verify_gamma_certificate(&s, &ch, tol)?);
        b.get(Parameter::Inter)
            .offer_lower(w.m, "exact:minimum edge clique cover");
    }

    let gamma_cert = |b: &mut Builder, cert: ParamCertificate| -> Result<()> {
        if let Some(x) = projection_vectors(&cert, tol) {
            if let Ok(ch) = delta_channel(&x) {
                b.add(verify_gamma_certificate(&s, &ch, tol)?);
            }
        }
        b.add(cert);
        Ok(())
    };
    let two_dim = gamma_at_most_two(g);
    let two_dim_feasible = matches!(two_dim, TwoDimOutcome::Feasible(_));
    match two_dim {
        TwoDimOutcome::Feasible(cert) => gamma_cert(&mut b, cert)?,
        TwoDimOutcome::Infeasible { .. } => b
            .get(Parameter::Gamma)
            .offer_lower(3, "exact:no representation by lines in C^2"),
    }

    let lo = b.lower(Parameter::Gamma);
    for k in lo..lo + effort.search_span() {
        if b.upper(Parameter::Gamma).is_some_and(|u| k >= u) {
            break;
        }
        if let SearchOutcome::Found(c) = qinter_search(g, k, &vec![1; n], seed, &budget, tol)? {
            gamma_cert(&mut b, c)?;
            break;
        }
    }
    b.get(Parameter::Gamma)
        .notes
        .push("quantum intersection number certificates bound gamma of the graph".into());

    Ok(GraphBoundsReport {
        report: b.finish(n, s.dim()),
        independence_number: alpha,
        complement_chromatic_number: chi,
        intersection_number: inter,
        two_dim_feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsys::{full_system, scalar_system, sk_system};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn run(s: &OperatorSystem) -> BoundsReport {
        bounds_report(s, Effort::Quick, &ReportHints::default(), 0, Exec::default(), &tol()).unwrap()
    }

    #[test]
    fn full_and_scalar() {
        let r = run(&full_system(2));
        for iv in r.intervals() {
            assert!(iv.exact && iv.lower.value == 1, "{iv:?}");
        }
        let r = run(&scalar_system(3));
        for iv in r.intervals() {
            assert!(iv.exact && iv.lower.value == 3, "{iv:?}");
        }
        assert!(r.chain_consistent());
    }

    #[test]
    fn s2_intervals() {
        let r = run(&sk_system(2));
        assert!(r.alpha.exact && r.alpha.lower.value == 1);
        assert!(r.beta.exact && r.beta.lower.value == 2);
        assert_eq!(r.gamma.lower.value, 2);
        assert_eq!(r.gamma.upper_value(), Some(3));
        assert_eq!(r.inter.upper_value(), Some(3));
        assert!(r.chain_consistent());
        assert!(r.certificates.iter().all(ParamCertificate::is_verified));
    }

    #[test]
    fn graph_reports() {
        let r = graph_bounds_report(&Graph::cycle(5), Effort::Quick, &ReportHints::default(), 0, Exec::default(), &tol()).unwrap();
        assert_eq!(r.independence_number, 2);
        assert_eq!(r.report.alpha.lower.value, 2);
        assert_eq!(r.report.gamma.lower.value, 3);
        assert_eq!(r.report.gamma.upper_value(), Some(3));
        assert_eq!(r.intersection_number, Some(5));
        assert!(r.report.chain_consistent());
        let c6c = Graph::cycle(6).complement();
        let r = graph_bounds_report(&c6c, Effort::Quick, &ReportHints::default(), 0, Exec::default(), &tol()).unwrap();
        assert!(!r.two_dim_feasible);
        assert!(r.report.gamma.lower.value >= 3);
    }
}
