//! JSON result format.
//!
//! Numbers are written in shortest round-trip form, so every reported value
//! parses back to the identical `f64`.

use serde::{Deserialize, Serialize};

use crate::calculus::Clustering;
use crate::solver::{SolveParams, SolveReport};

/// Centers as arrays of numbers with `null` for undefined coordinates.
pub mod centers_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::point::MissingPoint;

    pub fn serialize<S: Serializer>(centers: &[MissingPoint], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Option<f64>>> = centers.iter().map(MissingPoint::to_options).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<MissingPoint>, D::Error> {
        let rows = Vec::<Vec<Option<f64>>>::deserialize(d)?;
        Ok(rows.iter().map(|r| MissingPoint::from_options(r)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputParams {
    pub k: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub repeats: usize,
    pub delta: usize,
    pub m: usize,
    pub lambda_ceil: usize,
    pub max_calls: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutput {
    #[serde(with = "centers_serde")]
    pub centers: Vec<crate::point::MissingPoint>,
    pub assignment: Vec<usize>,
    pub cost: f64,
    pub trials: Vec<f64>,
    pub calls: u64,
    pub seed: u64,
    pub params: OutputParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl SolveOutput {
    pub fn new(report: &SolveReport, params: &SolveParams) -> Self {
        SolveOutput {
            centers: report.clustering.centers.clone(),
            assignment: report.clustering.assignment.clone(),
            cost: report.clustering.cost,
            trials: report.trial_costs.clone(),
            calls: report.stats.calls,
            seed: params.seed,
            params: OutputParams {
                k: params.k,
                epsilon: params.epsilon,
                alpha: params.alpha(),
                repeats: params.repeats,
                delta: report.delta,
                m: report.sampling.m,
                lambda_ceil: report.sampling.lambda_ceil,
                max_calls: params.max_calls,
            },
            seconds: None,
        }
    }

    pub fn clustering(&self) -> Clustering {
        Clustering {
            centers: self.centers.clone(),
            assignment: self.assignment.clone(),
            cost: self.cost,
        }
    }
}
