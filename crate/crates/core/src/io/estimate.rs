//! Susceptibility estimate file: the plot-ready product of the fit pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::SusceptibilityEstimate;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EstimateFile {
    pub molecule_name: String,
    pub alpha_stat_a3: f64,
    pub alpha_stat_uncertainty_a3: f64,
    pub internal_temperature_k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_low_a3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_high_a3: Option<f64>,
    pub weighted_mean_chi_a3: f64,
    pub weighted_mean_sigma_a3: f64,
    /// Weighted mean under the mean-velocity shift model, for comparison with
    /// the averaged-phase model that produced the primary numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_mean_velocity_model_a3: Option<f64>,
    pub per_voltage: Vec<PerVoltageRow>,
    pub systematics: Vec<SensitivityRow>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub config_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PerVoltageRow {
    pub voltage_v: f64,
    pub chi_a3: f64,
    pub sigma_a3: f64,
    pub included: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility_ratio: Option<f64>,
}

/// One row of the fractional-sensitivity table: the relative change of the
/// weighted mean under a relative perturbation of an instrument parameter.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SensitivityRow {
    pub parameter: String,
    pub fractional_perturbation: f64,
    pub fractional_chi_change: f64,
}

impl EstimateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("estimate: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("estimate serializes");
        s.push('\n');
        s
    }

    pub fn estimate(&self) -> SusceptibilityEstimate {
        SusceptibilityEstimate {
            per_voltage: self
                .per_voltage
                .iter()
                .map(|r| (r.voltage_v, r.chi_a3, r.sigma_a3, r.included))
                .collect(),
            weighted_mean_chi: self.weighted_mean_chi_a3,
            weighted_mean_sigma: self.weighted_mean_sigma_a3,
            systematic_notes: self.warnings.clone(),
        }
    }
}

/// Plot-ready per-voltage table.
pub const ESTIMATE_CSV_HEADER: &str = "voltage_V,chi_A3,sigma_A3,included";

pub fn write_estimate_csv(file: &EstimateFile) -> String {
    let mut out = String::new();
    out.push_str(ESTIMATE_CSV_HEADER);
    out.push('\n');
    for r in &file.per_voltage {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.voltage_v, r.chi_a3, r.sigma_a3, r.included
        ));
    }
    out
}
