//! Deflector calibration file: the fitted geometry factor with diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::CalibrationResult;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub geometry_factor_k_per_m: f64,
    pub sigma_k_per_m: f64,
    pub max_voltage_v: f64,
    pub field_homogeneity: f64,
    pub chi_squared_reduced: f64,
    pub known_chi_a3: f64,
    pub per_voltage: Vec<CalibrationRow>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub config_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CalibrationRow {
    pub voltage_v: f64,
    pub k_per_m: f64,
    pub sigma_k_per_m: f64,
}

impl CalibrationFile {
    pub fn new(result: &CalibrationResult, known_chi: f64, config_hash: String) -> Self {
        Self {
            geometry_factor_k_per_m: result.deflector.geometry_factor_k,
            sigma_k_per_m: result.sigma_k,
            max_voltage_v: result.deflector.max_voltage,
            field_homogeneity: result.deflector.field_homogeneity,
            chi_squared_reduced: result.chi_squared_reduced,
            known_chi_a3: known_chi,
            per_voltage: result
                .per_voltage
                .iter()
                .map(|&(voltage_v, k_per_m, sigma_k_per_m)| CalibrationRow {
                    voltage_v,
                    k_per_m,
                    sigma_k_per_m,
                })
                .collect(),
            notes: result.notes.clone(),
            config_hash,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("calibration: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("calibration serializes");
        s.push('\n');
        s
    }
}
