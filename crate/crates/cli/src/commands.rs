use ncgraph::channels::{confusability_system, delta_channel};
use ncgraph::graphs::Graph;
use ncgraph::opsys::{graph_system, OperatorSystem};
use ncgraph::params::{
    bounds_report, graph_bounds_report, iota_certificate, qinter_certificate,
    verify_beta_certificate, verify_eta_certificate, verify_gamma_certificate,
    verify_independent_set, CertificateJson, EtaMode, ParamCertificate, Parameter, ReportHints,
    Witness,
};
use ncgraph::theta::{
    capacity_report, graph_theta_witness, lovasz_theta_sdp, theta_probe, verify_theta_witness,
    CapacityTarget, ThetaWitnessJson,
};
use serde_json::json;

use crate::{CliError, Input, Outcome, Settings};

const PROBE_SAMPLES: usize = 256;
/// Agreement between the solved theta value and the witness value.
const THETA_SLACK: f64 = 1e-6;

fn hints(settings: &Settings) -> ReportHints {
    ReportHints {
        budget: settings.budget,
        ..ReportHints::default()
    }
}

fn wrong_kind(cmd: &str, input: &Input) -> CliError {
    CliError::Usage(format!("`{cmd}` does not accept a {} file", input.kind()))
}

/// The operator system an input describes.
fn system_of(input: &Input, settings: &Settings) -> Result<OperatorSystem, CliError> {
    match input {
        Input::Graph(g) => Ok(graph_system(g)),
        Input::System(s) => Ok(s.clone()),
        Input::Channel(ch) => Ok(confusability_system(ch, &settings.tol)?),
        other => Err(wrong_kind("system", other)),
    }
}

pub fn theta(input: &Input, settings: &Settings) -> Result<Outcome, CliError> {
    if let Input::Graph(g) = input {
        let sol = lovasz_theta_sdp(g)?;
        let w = graph_theta_witness(g, &sol, &settings.tol)?;
        let pass = (w.value() - sol.value).abs() <= THETA_SLACK * (1.0 + sol.value);
        return Ok(Outcome {
            report: json!({
                "input": "graph",
                "n": g.n(),
                "theta": sol.value,
                "kind": "solved",
                "gap": sol.gap,
                "iterations": sol.iterations,
                "witness": ThetaWitnessJson::from(&w),
            }),
            pass,
        });
    }
    let s = system_of(input, settings)?;
    let w = theta_probe(&s, PROBE_SAMPLES, settings.seed, &settings.tol)?;
    Ok(Outcome {
        report: json!({
            "input": input.kind(),
            "n": s.n(),
            "theta": w.value(),
            "kind": "witness_lower_bound",
            "witness": ThetaWitnessJson::from(&w),
            "notes": ["a witness value is a lower bound; the probe is a heuristic search"],
        }),
        pass: true,
    })
}

pub fn params(input: &Input, settings: &Settings) -> Result<Outcome, CliError> {
    let hints = hints(settings);
    if let Input::Graph(g) = input {
        let r = graph_bounds_report(g, settings.effort, &hints, settings.seed, settings.exec, &settings.tol)?;
        return Ok(Outcome {
            pass: r.report.chain_consistent(),
            report: r.to_json(),
        });
    }
    let s = system_of(input, settings)?;
    let r = bounds_report(&s, settings.effort, &hints, settings.seed, settings.exec, &settings.tol)?;
    Ok(Outcome {
        pass: r.chain_consistent(),
        report: r.to_json(),
    })
}

pub fn capacity(input: &Input, settings: &Settings) -> Result<Outcome, CliError> {
    let target = match input {
        Input::Graph(g) => CapacityTarget::Graph(g.clone()),
        Input::System(s) => CapacityTarget::System(s.clone()),
        Input::Channel(ch) => CapacityTarget::Channel(ch.clone()),
        other => return Err(wrong_kind("capacity", other)),
    };
    let r = capacity_report(
        &target,
        settings.effort,
        &hints(settings),
        settings.seed,
        settings.exec,
        &settings.tol,
    )?;
    Ok(Outcome {
        pass: r.passed(),
        report: r.to_json(),
    })
}

fn replay(
    cert: &CertificateJson,
    s: &OperatorSystem,
    graph: Option<&Graph>,
    settings: &Settings,
) -> Result<ParamCertificate, CliError> {
    let tol = &settings.tol;
    let witness = cert.witness(tol)?;
    let unsupported = || {
        CliError::Usage(format!(
            "no replay for a {} certificate with a {} witness",
            cert.parameter.name(),
            cert.witness_kind
        ))
    };
    Ok(match (cert.parameter, witness) {
        (Parameter::Alpha, Witness::Vectors(x)) => verify_independent_set(s, &x)?,
        (Parameter::Beta, Witness::Channel(ch)) => verify_beta_certificate(s, &ch, tol)?,
        (Parameter::Gamma, Witness::Channel(ch)) => verify_gamma_certificate(s, &ch, tol)?,
        (Parameter::Inter, Witness::Channel(ch)) => iota_certificate(s, &ch, tol)?,
        (Parameter::Gamma, Witness::Vectors(x)) => {
            verify_gamma_certificate(s, &delta_channel(&x)?, tol)?
        }
        (Parameter::Beta, Witness::Gram(b)) => verify_eta_certificate(s, &b, EtaMode::Beta, tol)?,
        (Parameter::Gamma, Witness::Gram(b)) => verify_eta_certificate(s, &b, EtaMode::Gamma, tol)?,
        (Parameter::Qinter, Witness::Projections(p)) => {
            let g = graph.ok_or_else(|| {
                CliError::Usage("projection certificates are checked against a graph".into())
            })?;
            qinter_certificate(g, &p)
        }
        _ => return Err(unsupported()),
    })
}

pub fn verify(certificate: &Input, target: &Input, settings: &Settings) -> Result<Outcome, CliError> {
    let s = system_of(target, settings)?;
    let graph = match target {
        Input::Graph(g) => Some(g),
        _ => None,
    };
    match certificate {
        Input::Certificate(cert) => {
            let r = replay(cert, &s, graph, settings)?;
            let pass = r.is_verified()
                && r.value() == cert.value
                && r.direction() == cert.direction
                && r.parameter() == cert.parameter;
            Ok(Outcome {
                report: json!({
                    "parameter": cert.parameter,
                    "direction": cert.direction,
                    "witness_kind": cert.witness_kind,
                    "claimed_value": cert.value,
                    "replayed_value": r.value(),
                    "verified": r.is_verified(),
                    "residual": r.residual(),
                }),
                pass,
            })
        }
        Input::ThetaWitness(w) => {
            let k = w.k.to_matrix()?;
            let (verified, value, error) = match verify_theta_witness(&s, &k, &settings.tol) {
                Ok(v) => (true, Some(v.value()), None),
                Err(e) => (false, None, Some(e.to_string())),
            };
            let pass = verified && value.is_some_and(|v| v >= w.value - THETA_SLACK * (1.0 + w.value));
            Ok(Outcome {
                report: json!({
                    "parameter": "theta",
                    "direction": "lower",
                    "witness_kind": "theta",
                    "claimed_value": w.value,
                    "replayed_value": value,
                    "verified": verified,
                    "error": error,
                }),
                pass,
            })
        }
        other => Err(wrong_kind("verify", other)),
    }
}
