//! Comparison report across two or more susceptibility estimates: pairwise
//! separations, consistency of the thermal dipole contribution with the
//! side-chain budget, and the collated systematic-sensitivity tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::estimate::{EstimateFile, SensitivityRow};
use crate::vanvleck::side_chain_budget;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComparisonReport {
    pub pairwise: Vec<PairwiseSeparation>,
    pub van_vleck: Vec<VanVleckConsistency>,
    pub systematics: Vec<MoleculeSystematics>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PairwiseSeparation {
    pub molecule_a: String,
    pub molecule_b: String,
    /// |χ_a − χ_b| / sqrt(σ_a² + σ_b²).
    pub separation_sigma: f64,
    /// Separation beyond 5σ.
    pub distinguishable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VanVleckConsistency {
    pub molecule: String,
    pub measured_chi_a3: f64,
    pub measured_sigma_a3: f64,
    pub alpha_stat_a3: f64,
    pub alpha_stat_uncertainty_a3: f64,
    /// Measured thermal contribution: χ − α_stat, widened by the α
    /// uncertainty only (statistical σ is quoted separately).
    pub thermal_interval_a3: (f64, f64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_budget_a3: Option<(f64, f64)>,
    /// Interval overlap between measurement and budget; absent when the
    /// molecule carries no side-chain budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MoleculeSystematics {
    pub molecule: String,
    pub rows: Vec<SensitivityRow>,
}

fn intervals_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Build the report from two or more estimates.
pub fn build_report(estimates: &[EstimateFile]) -> Result<ComparisonReport> {
    if estimates.len() < 2 {
        return Err(Error::Config(format!(
            "report needs at least 2 estimates, got {}",
            estimates.len()
        )));
    }
    let mut pairwise = Vec::new();
    for i in 0..estimates.len() {
        for j in i + 1..estimates.len() {
            let (a, b) = (&estimates[i], &estimates[j]);
            let sigma =
                (a.weighted_mean_sigma_a3.powi(2) + b.weighted_mean_sigma_a3.powi(2)).sqrt();
            let separation_sigma = if sigma > 0.0 {
                (a.weighted_mean_chi_a3 - b.weighted_mean_chi_a3).abs() / sigma
            } else {
                f64::INFINITY
            };
            pairwise.push(PairwiseSeparation {
                molecule_a: a.molecule_name.clone(),
                molecule_b: b.molecule_name.clone(),
                separation_sigma,
                distinguishable: separation_sigma > 5.0,
            });
        }
    }

    let mut van_vleck = Vec::new();
    for e in estimates {
        let thermal = (
            e.weighted_mean_chi_a3 - (e.alpha_stat_a3 + e.alpha_stat_uncertainty_a3),
            e.weighted_mean_chi_a3 - (e.alpha_stat_a3 - e.alpha_stat_uncertainty_a3),
        );
        let budget = match (e.side_chain_count, e.side_chain_low_a3, e.side_chain_high_a3) {
            (Some(n), Some(lo), Some(hi)) => Some(side_chain_budget(n, lo, hi)?),
            _ => None,
        };
        van_vleck.push(VanVleckConsistency {
            molecule: e.molecule_name.clone(),
            measured_chi_a3: e.weighted_mean_chi_a3,
            measured_sigma_a3: e.weighted_mean_sigma_a3,
            alpha_stat_a3: e.alpha_stat_a3,
            alpha_stat_uncertainty_a3: e.alpha_stat_uncertainty_a3,
            thermal_interval_a3: thermal,
            side_chain_budget_a3: budget,
            consistent: budget.map(|b| intervals_overlap(thermal, b)),
        });
    }

    let systematics = estimates
        .iter()
        .map(|e| MoleculeSystematics {
            molecule: e.molecule_name.clone(),
            rows: e.systematics.clone(),
        })
        .collect();

    Ok(ComparisonReport {
        pairwise,
        van_vleck,
        systematics,
    })
}

impl ComparisonReport {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("report: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn estimate(name: &str, chi: f64, sigma: f64, alpha: f64) -> EstimateFile {
        EstimateFile {
            molecule_name: name.into(),
            alpha_stat_a3: alpha,
            alpha_stat_uncertainty_a3: 2.0,
            internal_temperature_k: 458.0,
            side_chain_count: Some(4),
            side_chain_low_a3: Some(10.0),
            side_chain_high_a3: Some(15.0),
            weighted_mean_chi_a3: chi,
            weighted_mean_sigma_a3: sigma,
            chi_mean_velocity_model_a3: None,
            per_voltage: vec![],
            systematics: vec![],
            warnings: vec![],
            config_hash: "0".into(),
        }
    }

    #[test]
    fn separation_matches_hand_arithmetic() {
        let report =
            build_report(&[estimate("c1", 102.0, 0.8, 63.0), estimate("c2", 126.0, 0.5, 70.0)])
                .unwrap();
        let sep = report.pairwise[0].separation_sigma;
        let expect = (126.0 - 102.0) / (0.8f64.powi(2) + 0.5f64.powi(2)).sqrt();
        assert!((sep - expect).abs() < 1e-12);
        assert!((sep - 25.4).abs() < 0.1);
        assert!(report.pairwise[0].distinguishable);
    }

    #[test]
    fn identical_estimates_have_zero_separation() {
        let report =
            build_report(&[estimate("a", 102.0, 0.8, 63.0), estimate("b", 102.0, 0.8, 63.0)])
                .unwrap();
        assert_eq!(report.pairwise[0].separation_sigma, 0.0);
        assert!(!report.pairwise[0].distinguishable);
    }

    #[test]
    fn van_vleck_interval_logic() {
        let report =
            build_report(&[estimate("c1", 102.0, 0.8, 63.0), estimate("c2", 126.0, 0.5, 70.0)])
                .unwrap();
        // Compound 1: [102-65, 102-61] = [37, 41] overlaps [40, 60].
        let row = &report.van_vleck[0];
        assert_eq!(row.thermal_interval_a3, (37.0, 41.0));
        assert_eq!(row.side_chain_budget_a3, Some((40.0, 60.0)));
        assert_eq!(row.consistent, Some(true));
        // Compound 2: [126-72, 126-68] = [54, 58] inside [40, 60].
        let row = &report.van_vleck[1];
        assert_eq!(row.thermal_interval_a3, (54.0, 58.0));
        assert_eq!(row.consistent, Some(true));
    }

    #[test]
    fn disjoint_budget_flags_inconsistent() {
        let mut e = estimate("odd", 200.0, 0.5, 63.0);
        e.side_chain_high_a3 = Some(12.0);
        let report = build_report(&[e, estimate("c1", 102.0, 0.8, 63.0)]).unwrap();
        assert_eq!(report.van_vleck[0].consistent, Some(false));
    }

    #[test]
    fn needs_two_estimates() {
        assert!(build_report(&[estimate("only", 100.0, 1.0, 60.0)]).is_err());
    }
}
