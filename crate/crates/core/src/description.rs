//! JSON model descriptions:
//!
//! ```json
//! {"base": {"kind": "poisson", "params": {"lambda": 1.0}}, "n": 3, "tail_tolerance": 1e-12}
//! {"base": {"kind": "explicit", "pmf": [0.25, 0.5, 0.25]}, "n": 2}
//! ```

use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDistribution, Kind, DEFAULT_TAIL_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{build_model, SchurModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometricParams {
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaseDescription {
    Poisson { params: PoissonParams },
    Geometric { params: GeometricParams },
    Explicit { pmf: Vec<f64> },
}

/// Deliberate corruption applied after building, for testing verifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultInjection {
    pub mean_product_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub base: BaseDescription,
    pub n: usize,
    #[serde(default = "default_tail_tolerance")]
    pub tail_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault_injection: Option<FaultInjection>,
}

fn default_tail_tolerance() -> f64 {
    DEFAULT_TAIL_TOLERANCE
}

impl BaseDescription {
    pub fn from_distribution(dist: &DiscreteDistribution) -> Self {
        match dist.kind() {
            Kind::Poisson { lambda } => Self::Poisson {
                params: PoissonParams { lambda: *lambda },
            },
            Kind::Geometric { q } => Self::Geometric {
                params: GeometricParams { q: *q },
            },
            Kind::Explicit(e) => Self::Explicit {
                pmf: e.pmf().to_vec(),
            },
        }
    }

    pub fn to_distribution(&self, tail_tolerance: f64) -> Result<DiscreteDistribution> {
        let dist = match self {
            Self::Poisson { params } => DiscreteDistribution::poisson(params.lambda)?,
            Self::Geometric { params } => DiscreteDistribution::geometric(params.q)?,
            Self::Explicit { pmf } => DiscreteDistribution::explicit(pmf.clone())?,
        };
        dist.with_tail_tolerance(tail_tolerance)
    }
}

impl ModelDescription {
    pub fn new(base: &DiscreteDistribution, n: usize) -> Self {
        Self {
            base: BaseDescription::from_distribution(base),
            n,
            tail_tolerance: base.tail_tolerance(),
            fault_injection: None,
        }
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model descriptions always serialize")
    }

    pub fn distribution(&self) -> Result<DiscreteDistribution> {
        self.base.to_distribution(self.tail_tolerance)
    }

    /// Builds the described model, applying any fault injection.
    pub fn build(&self) -> Result<SchurModel> {
        let model = build_model(&self.distribution()?, self.n)?;
        Ok(match &self.fault_injection {
            Some(f) => model.with_mean_product_scale(f.mean_product_scale),
            None => model,
        })
    }
}
