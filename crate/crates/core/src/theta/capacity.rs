use super::{graph_theta_witness, lovasz_theta_sdp, theta_probe, ThetaWitness, ThetaWitnessJson};
use crate::channels::{confusability_system, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::{shannon_capacity_lower, Graph};
use crate::numkernel::Tolerance;
use crate::opsys::{self, OperatorSystem};
use crate::par::Exec;
use crate::params::{
    alpha_search, bounds_report, graph_bounds_report, tensor_certificate, BoundsReport, Effort,
    Interval, ReportHints, SearchBudget, SearchOutcome, Witness,
};

/// What a capacity report is about.
#[derive(Debug, Clone)]
pub enum CapacityTarget {
    Channel(QuantumChannel),
    System(OperatorSystem),
    Graph(Graph),
}

/// Theta is a solved value for graphs and only a witness lower bound for
/// general operator systems.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaValue {
    Solved {
        value: f64,
        gap: f64,
        witness: ThetaWitness,
    },
    WitnessLower {
        witness: ThetaWitness,
    },
}

impl ThetaValue {
    pub fn value(&self) -> f64 {
        match self {
            ThetaValue::Solved { value, .. } => *value,
            ThetaValue::WitnessLower { witness } => witness.value(),
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, ThetaValue::Solved { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCheck {
    pub name: String,
    pub pass: bool,
}

/// Zero-error capacity summary: `alpha <= Theta <= beta`, with theta alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub alpha: Interval,
    /// `alpha(S^{(x) r})^{1/r}` lower bounds for `r = 1, 2, ...`.
    pub shannon_lower: Vec<f64>,
    /// Best certified upper bound on the Shannon capacity and its source.
    pub shannon_upper: Option<(f64, String)>,
    pub bounds: BoundsReport,
    pub theta: ThetaValue,
    pub checks: Vec<CapacityCheck>,
    pub notes: Vec<String>,
}

impl CapacityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn shannon_lower_best(&self) -> f64 {
        self.shannon_lower.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let theta = match &self.theta {
            ThetaValue::Solved {
                value,
                gap,
                witness,
            } => serde_json::json!({
                "kind": "solved",
                "value": value,
                "gap": gap,
                "witness": ThetaWitnessJson::from(witness),
            }),
            ThetaValue::WitnessLower { witness } => serde_json::json!({
                "kind": "witness_lower_bound",
                "value": witness.value(),
                "witness": ThetaWitnessJson::from(witness),
            }),
        };
        serde_json::json!({
            "alpha": self.alpha,
            "shannon_lower": self.shannon_lower,
            "shannon_upper": self.shannon_upper.as_ref().map(|(v, r)| serde_json::json!({"value": v, "witness_ref": r})),
            "bounds": self.bounds.to_json(),
            "theta": theta,
            "checks": self.checks.iter().map(|c| serde_json::json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

const SLACK: f64 = 1e-5;

fn checks_for(
    alpha: usize,
    lower: f64,
    upper: Option<f64>,
    bounds: &BoundsReport,
) -> Vec<CapacityCheck> {
    let mut out = vec![
        CapacityCheck {
            name: "alpha <= Shannon lower bound".into(),
            pass: alpha as f64 <= lower + SLACK,
        },
        CapacityCheck {
            name: "alpha <= beta <= gamma <= inter".into(),
            pass: bounds.chain_consistent(),
        },
    ];
    if let Some(u) = upper {
        out.push(CapacityCheck {
            name: "Shannon lower bound <= upper bound".into(),
            pass: lower <= u + SLACK,
        });
    }
    out
}

fn upper_from_beta(bounds: &BoundsReport) -> Option<(f64, String)> {
    bounds.beta.upper.as_ref().map(|b| (b.value as f64, "beta".to_string()))
}

/// Capacity chain for a graph or an operator system.
///
/// Graphs get an exact alpha, the lower-bound sequence from strong powers and
/// a solved theta. Operator systems get search-certified alpha, the
/// `r = 2` tensor-power bound when the ambient allows it, and theta only as
/// a witness lower bound.
pub fn capacity_report(
    target: &CapacityTarget,
    effort: Effort,
    hints: &ReportHints,
    seed: u64,
    exec: Exec,
    tol: &Tolerance,
) -> Result<CapacityReport> {
    let mut notes = vec![
        "quantities defined through the quantum Lovasz number are out of scope".to_string(),
    ];
    let s = match target {
        CapacityTarget::Graph(g) => return graph_capacity(g, effort, hints, seed, exec, tol),
        CapacityTarget::Channel(ch) => confusability_system(ch, tol)?,
        CapacityTarget::System(s) => s.clone(),
    };
    let bounds = bounds_report(&s, effort, hints, seed, exec, tol)?;
    let alpha1 = bounds.alpha.lower.value;
    let mut shannon_lower = vec![alpha1 as f64];

    if s.n() <= 4 {
        let square = opsys::tensor(&s, &s);
        let mut alpha2 = alpha1 * alpha1;
        if let Some(cert) = bounds
            .certificates
            .iter()
            .find(|c| matches!(c.witness(), Witness::Vectors(_)) && c.value() == alpha1)
        {
            let sq = tensor_certificate(&s, cert, &s, cert, tol)?;
            if !sq.is_verified() {
                return Err(Error::NumericalBreakdown(
                    "tensor square of an independent set failed to verify".into(),
                ));
            }
        }
        let tries = match effort {
            Effort::Quick => 1,
            Effort::Full => 2,
        };
        // the square lives in M_{n^2}; quick runs search it lightly
        let budget = hints.budget.unwrap_or(match effort {
            Effort::Quick => SearchBudget::new(2, 500).with_exec(exec),
            Effort::Full => effort.budget(exec),
        });
        for _ in 0..tries {
            match alpha_search(&square, alpha2 + 1, seed, &budget)? {
                SearchOutcome::Found(c) => alpha2 = c.value(),
                SearchOutcome::NotFound { starts, .. } => {
                    notes.push(format!(
                        "no independent set of size {} found in the tensor square ({starts} starts; not a proof)",
                        alpha2 + 1
                    ));
                    break;
                }
            }
        }
        shannon_lower.push((alpha2 as f64).sqrt());
    } else {
        notes.push("tensor square skipped: ambient dimension above 4".into());
    }

    let samples = match effort {
        Effort::Quick => 64,
        Effort::Full => 512,
    };
    let witness = theta_probe(&s, samples, seed, tol)?;
    notes.push("theta is a witness lower bound from a heuristic probe".into());
    let shannon_upper = upper_from_beta(&bounds);
    let lower = shannon_lower.iter().copied().fold(0.0, f64::max);
    let checks = checks_for(alpha1, lower, shannon_upper.as_ref().map(|u| u.0), &bounds);
    Ok(CapacityReport {
        alpha: bounds.alpha.clone(),
        shannon_lower,
        shannon_upper,
        bounds,
        theta: ThetaValue::WitnessLower { witness },
        checks,
        notes,
    })
}

fn graph_capacity(
    g: &Graph,
    effort: Effort,
    hints: &ReportHints,
    seed: u64,
    exec: Exec,
    tol: &Tolerance,
) -> Result<CapacityReport> {
    let gr = graph_bounds_report(g, effort, hints, seed, exec, tol)?;
    let bounds = gr.report.clone();
    let r_max = match effort {
        Effort::Quick => 2,
        Effort::Full => 3,
    };
    let mut shannon_lower = Vec::new();
    for r in (1..=r_max).rev() {
        if let Ok(seq) = shannon_capacity_lower(g, r) {
            shannon_lower = seq;
            break;
        }
    }
    if shannon_lower.is_empty() {
        shannon_lower.push(gr.independence_number as f64);
    }
    let sol = lovasz_theta_sdp(g)?;
    let witness = graph_theta_witness(g, &sol, tol)?;
    let theta = sol.value;
    let mut shannon_upper = upper_from_beta(&bounds);
    if shannon_upper.as_ref().is_none_or(|u| theta < u.0) {
        shannon_upper = Some((theta, "theta".into()));
    }
    let lower = shannon_lower.iter().copied().fold(0.0, f64::max);
    let alpha = gr.independence_number;
    let mut checks = checks_for(alpha, lower, shannon_upper.as_ref().map(|u| u.0), &bounds);
    checks.push(CapacityCheck {
        name: "alpha <= theta".into(),
        pass: alpha as f64 <= theta + SLACK,
    });
    checks.push(CapacityCheck {
        name: "theta witness matches solved value".into(),
        pass: (witness.value() - theta).abs() < SLACK * (1.0 + theta),
    });
    if let Some(chi) = gr.complement_chromatic_number {
        checks.push(CapacityCheck {
            name: "theta <= chromatic number of the complement".into(),
            pass: theta <= chi as f64 + SLACK,
        });
    }
    Ok(CapacityReport {
        alpha: bounds.alpha.clone(),
        shannon_lower,
        shannon_upper,
        bounds,
        theta: ThetaValue::Solved {
            value: theta,
            gap: sol.gap,
            witness,
        },
        checks,
        notes: vec![
            "quantities defined through the quantum Lovasz number are out of scope".to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opsys::{scalar_system, sk_system};

    fn run(t: CapacityTarget) -> CapacityReport {
        capacity_report(&t, Effort::Quick, &ReportHints::default(), 0, Exec::default(), &Tolerance::default()).unwrap()
    }

    #[test]
    fn c5() {
        let r = run(CapacityTarget::Graph(Graph::cycle(5)));
        assert_eq!(r.alpha.lower.value, 2);
        assert!((r.shannon_lower_best() - 5f64.sqrt()).abs() < 1e-12);
        assert!((r.theta.value() - 5f64.sqrt()).abs() < 1e-6);
        let (u, src) = r.shannon_upper.clone().unwrap();
        assert!((u - 5f64.sqrt()).abs() < 1e-6 && src == "theta");
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn s2_and_scalar() {
        let r = run(CapacityTarget::System(sk_system(2)));
        assert_eq!(r.shannon_lower, vec![1.0, 1.0]);
        assert_eq!(r.shannon_upper.as_ref().unwrap().0, 2.0);
        assert!(!r.theta.is_solved());
        assert!(r.passed());
        let r = run(CapacityTarget::System(scalar_system(2)));
        assert_eq!(r.alpha.lower.value, 2);
        assert!(r.alpha.exact);
        assert_eq!(r.shannon_upper.as_ref().unwrap().0, 2.0);
        assert!((r.theta.value() - 2.0).abs() < 1e-9);
        for iv in r.bounds.intervals() {
            assert!(iv.exact && iv.lower.value == 2, "{iv:?}");
        }
    }
}
