use std::path::Path;

use ncgraph::channels::{ChannelJson, QuantumChannel};
use ncgraph::graphs::{Graph, GraphJson};
use ncgraph::numkernel::Tolerance;
use ncgraph::opsys::{OperatorSystem, OperatorSystemJson};
use ncgraph::params::CertificateJson;
use ncgraph::theta::ThetaWitnessJson;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

/// A parsed input file. The kind is detected from the top-level keys:
/// `edges` (graph), `basis` (operator system), `kraus` (channel),
/// `witness_kind` (certificate) or `k` plus `value` (theta witness).
#[derive(Debug, Clone)]
pub enum Input {
    Graph(Graph),
    System(OperatorSystem),
    Channel(QuantumChannel),
    Certificate(CertificateJson),
    ThetaWitness(ThetaWitnessJson),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Graph(_) => "graph",
            Input::System(_) => "system",
            Input::Channel(_) => "channel",
            Input::Certificate(_) => "certificate",
            Input::ThetaWitness(_) => "theta_witness",
        }
    }
}

fn decode<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

pub fn parse_input(path: &Path, text: &str, tol: &Tolerance) -> Result<Input, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })?;
    let Some(obj) = v.as_object() else {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            msg: "top level must be an object".into(),
        });
    };
    let core = |e: ncgraph::Error| CliError::Parse {
        path: path.to_path_buf(),
        msg: e.to_string(),
    };
    if obj.contains_key("witness_kind") {
        Ok(Input::Certificate(decode(path, v)?))
    } else if obj.contains_key("edges") {
        let g: GraphJson = decode(path, v)?;
        Ok(Input::Graph(g.to_graph().map_err(core)?))
    } else if obj.contains_key("kraus") {
        let c: ChannelJson = decode(path, v)?;
        Ok(Input::Channel(c.to_channel().map_err(core)?))
    } else if obj.contains_key("basis") {
        let s: OperatorSystemJson = decode(path, v)?;
        Ok(Input::System(s.to_system(tol).map_err(core)?))
    } else if obj.contains_key("k") && obj.contains_key("value") {
        Ok(Input::ThetaWitness(decode(path, v)?))
    } else {
        Err(CliError::Parse {
            path: path.to_path_buf(),
            msg: "expected one of the keys edges, basis, kraus, witness_kind or k".into(),
        })
    }
}

pub fn load_input(path: &Path, tol: &Tolerance) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_input(path, &text, tol)
}
