//! On-disk report envelopes. Reports carry the config digest, every
//! knob that influenced the run, and the computed results; nothing
//! time- or path-dependent, so identical inputs give identical bytes.

use serde::Serialize;

use nugabor_core::bounds::FrameReport;
use nugabor_core::perturb::{PerturbVerification, PerturbationReport};
use nugabor_core::reductions::EntryBesselReport;

use crate::config::SystemConfig;

#[derive(Debug, Serialize)]
pub struct BoundsReportFile {
    pub command: &'static str,
    pub config_digest: String,
    pub grid: i64,
    pub tol: f64,
    pub seed: u64,
    pub trials: i64,
    pub results: FrameReport,
}

#[derive(Debug, Serialize)]
pub struct PerturbReportFile {
    pub command: &'static str,
    pub base_digest: String,
    pub perturbed_digest: String,
    pub grid: i64,
    /// "user" when A0/B0 came from flags, "grid-estimate" otherwise.
    pub bounds_source: &'static str,
    pub results: PerturbationReport,
    pub verification: Option<PerturbVerification>,
}

#[derive(Debug, Serialize)]
pub struct ReduceReportFile {
    pub command: &'static str,
    pub mode: String,
    pub config_digest: String,
    pub grid: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived_config: Option<SystemConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entries: Option<EntryBesselReport>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
