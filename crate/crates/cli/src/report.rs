//! Serializable report shapes printed by the subcommands.

use eo_region::fairopt::Certificate;
use serde::Serialize;

pub fn certificate_str(c: Certificate) -> &'static str {
    match c {
        Certificate::NontrivialEOWitness => "nontrivial_eo_witness",
        Certificate::AllEOTrivial => "all_eo_trivial",
        Certificate::NoNontrivialExists => "no_nontrivial_exists",
    }
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    pub tau: f64,
    pub tau_star: f64,
    pub bayes_accuracy: f64,
    pub bayes_opp_diff: f64,
    pub min_eo_error: f64,
    pub compatible: bool,
    pub certificate: &'static str,
    pub witness: Option<PredictorReport>,
}

/// A predictor in pointwise form: `qhat[i]` is the probability of
/// predicting 1 on row `i` of the input source.
#[derive(Serialize)]
pub struct PredictorReport {
    pub qhat: Vec<f64>,
    pub error: f64,
    pub opp_diff: f64,
}

#[derive(Serialize)]
pub struct OptimalReport {
    pub eps: f64,
    pub rows: Vec<OptimalRow>,
    pub error: f64,
    pub opp_diff: f64,
}

#[derive(Serialize)]
pub struct OptimalRow {
    pub x: String,
    pub a: u8,
    pub qhat: f64,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub mass_above: [f64; 2],
    pub mass_below: [f64; 2],
    pub holds: bool,
    pub tau_star: f64,
    pub nontrivial_exists: bool,
    pub witness: Option<CheckWitness>,
}

#[derive(Serialize)]
pub struct CheckWitness {
    pub qhat: Vec<f64>,
    pub error: f64,
    pub opp_diff: f64,
    pub accuracy: f64,
}

#[derive(Serialize)]
pub struct GenerateSummary {
    pub seed: u64,
    pub compatible: bool,
    pub certificate: &'static str,
    pub min_eo_error: f64,
    pub trivial_error: f64,
    pub tau_star: f64,
}

#[derive(Serialize)]
pub struct GenerateSidecar {
    pub seed: u64,
    #[serde(rename = "P")]
    pub p: [f64; 3],
    #[serde(rename = "Q")]
    pub q: [f64; 3],
    pub constraints: ConstraintFlags,
}

#[derive(Serialize)]
pub struct ConstraintFlags {
    #[serde(rename = "C1")]
    pub c1: bool,
    #[serde(rename = "C2")]
    pub c2: bool,
    #[serde(rename = "C3")]
    pub c3: bool,
    #[serde(rename = "C4")]
    pub c4: bool,
    #[serde(rename = "C5")]
    pub c5: bool,
}

#[derive(Serialize)]
pub struct IngestSummary {
    pub rows: usize,
}
