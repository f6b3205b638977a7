//! Certified bounds on the independence number, subcomplexity, complexity and
//! intersection number of operator systems and graphs.
//!
//! Every bound is carried by a [`ParamCertificate`] whose witness can be
//! replayed. Searches are seeded, budgeted and never turn a failure to find a
//! witness into a claim of absence.

mod gram;
mod report;
mod search;
mod transform;
mod two_dim;
mod verify;

pub use gram::{
    check_f_membership, check_h_membership, gram_from_projections, gram_to_channel,
    gram_to_projections, normalize_to_h, random_h_instance, rank_reduction_step,
    verify_eta_certificate, EtaMode, GramBlockMatrix, GramBlockMatrixJson,
};
pub use report::{
    bounds_report, graph_bounds_report, BoundsReport, Effort, GraphBoundsReport, Interval,
    ReportHints,
};
pub use search::{
    alpha_search, kraus_search, qinter_search, rank_one_in_subspace, KrausMode, RankOneOutcome,
    SearchBudget, SearchOutcome,
};
pub use transform::{conjugate_certificate, direct_sum_certificate, tensor_certificate};
pub use two_dim::{gamma_at_most_two, TwoDimOutcome};
pub use verify::{
    iota_certificate, qinter_certificate, verify_beta_certificate, verify_gamma_certificate,
    verify_independent_set, verify_noncancelling,
};

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelJson, ProjectionTuple, QuantumChannel};
use crate::error::{Error, Result};
use crate::graphs::VectorTuple;
use crate::numkernel::{CMatrix, MatrixJson};

/// Which parameter a certificate bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Alpha,
    Beta,
    Gamma,
    Inter,
    Qinter,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Alpha => "alpha",
            Parameter::Beta => "beta",
            Parameter::Gamma => "gamma",
            Parameter::Inter => "inter",
            Parameter::Qinter => "qinter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

/// The object that makes a bound checkable.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Vectors(VectorTuple),
    Projections(ProjectionTuple),
    Channel(QuantumChannel),
    Gram(GramBlockMatrix),
    /// A Hermitian `K` in the perp with `I + K` positive.
    Theta(CMatrix),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Vectors(_) => "vectors",
            Witness::Projections(_) => "projections",
            Witness::Channel(_) => "channel",
            Witness::Gram(_) => "gram",
            Witness::Theta(_) => "theta",
        }
    }
}

/// A bound together with its witness. Only the `verify_*` functions in this
/// module construct certificates, so `verified` reflects an actual check.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCertificate {
    parameter: Parameter,
    direction: Direction,
    value: usize,
    witness: Witness,
    seed: Option<u64>,
    verified: bool,
    /// Worst residual seen by the verifier (angle, distance or defect).
    residual: f64,
}

impl ParamCertificate {
    pub(crate) fn new(
        parameter: Parameter,
        direction: Direction,
        value: usize,
        witness: Witness,
        verified: bool,
        residual: f64,
    ) -> Self {
        Self {
            parameter,
            direction,
            value,
            witness,
            seed: None,
            verified,
            residual,
        }
    }

    pub(crate) fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn channel(&self) -> Option<&QuantumChannel> {
        match &self.witness {
            Witness::Channel(ch) => Some(ch),
            _ => None,
        }
    }
}

/// Wire format of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub parameter: Parameter,
    pub direction: Direction,
    pub value: usize,
    pub witness_kind: String,
    pub witness: serde_json::Value,
    pub seed: Option<u64>,
    pub verified: bool,
}

impl From<&ParamCertificate> for CertificateJson {
    fn from(c: &ParamCertificate) -> Self {
        let witness = match &c.witness {
            Witness::Vectors(x) => serde_json::to_value(MatrixJson::from_matrix(&x.to_matrix())),
            Witness::Projections(p) => serde_json::to_value(
                p.projections()
                    .iter()
                    .map(MatrixJson::from_matrix)
                    .collect::<Vec<_>>(),
            ),
            Witness::Channel(ch) => serde_json::to_value(ChannelJson::from(ch)),
            Witness::Gram(g) => serde_json::to_value(GramBlockMatrixJson::from(g)),
            Witness::Theta(k) => serde_json::to_value(MatrixJson::from_matrix(k)),
        }
        .expect("witnesses serialise");
        Self {
            parameter: c.parameter,
            direction: c.direction,
            value: c.value,
            witness_kind: c.witness.kind().to_string(),
            witness,
            seed: c.seed,
            verified: c.verified,
        }
    }
}

impl CertificateJson {
    /// Decode the witness. The `verified` flag is not trusted: callers must
    /// replay the certificate against a system.
    pub fn witness(&self, tol: &crate::numkernel::Tolerance) -> Result<Witness> {
        let bad = |e: serde_json::Error| Error::InvalidInput(format!("witness: {e}"));
        match self.witness_kind.as_str() {
            "vectors" => {
                let m: MatrixJson = serde_json::from_value(self.witness.clone()).map_err(bad)?;
                Ok(Witness::Vectors(VectorTuple::from_columns(&m.to_matrix()?)?))
            }
            "projections" => {
                let ms: Vec<MatrixJson> =
                    serde_json::from_value(self.witness.clone()).map_err(bad)?;
                let mats = ms
                    .iter()
                    .map(MatrixJson::to_matrix)
                    .collect::<Result<Vec<_>>>()?;
                let k = mats.first().map_or(0, |m| m.nrows());
                Ok(Witness::Projections(ProjectionTuple::new(k, mats, tol)?))
            }
            "channel" => {
                let c: ChannelJson = serde_json::from_value(self.witness.clone()).map_err(bad)?;
                Ok(Witness::Channel(c.to_channel()?))
            }
            "gram" => {
                let g: GramBlockMatrixJson =
                    serde_json::from_value(self.witness.clone()).map_err(bad)?;
                Ok(Witness::Gram(g.to_gram()?))
            }
            "theta" => {
                let m: MatrixJson = serde_json::from_value(self.witness.clone()).map_err(bad)?;
                Ok(Witness::Theta(m.to_matrix()?))
            }
            other => Err(Error::InvalidInput(format!("unknown witness kind {other}"))),
        }
    }
}
