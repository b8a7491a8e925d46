//! Experiment configuration file: JSON with explicit unit-suffixed keys.
//!
//! Silent unit errors are the dominant failure mode in this domain, so every
//! numeric key carries its unit and unknown keys are rejected outright.

use serde::{Deserialize, Serialize};

use crate::beamline::{DeflectorConfig, VelocityDistribution};
use crate::error::{Error, Result};
use crate::fringe::GratingSet;
use crate::physics::{DipoleContribution, MoleculeSpec};
use crate::pipeline::{Experiment, ScanProtocol};
use crate::vanvleck::{chi_total, DipoleEnsemble};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub molecule: MoleculeSection,
    pub gratings: GratingSection,
    pub deflector: DeflectorSection,
    pub velocity: VelocitySection,
    pub scan: ScanSection,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MoleculeSection {
    pub name: String,
    pub mass_amu: f64,
    pub alpha_stat_a3: f64,
    #[serde(default)]
    pub alpha_stat_uncertainty_a3: f64,
    pub alpha_opt_a3: f64,
    pub chi_true_a3: f64,
    #[serde(default)]
    pub dipole_model: Vec<DipoleSection>,
    pub internal_temperature_k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_low_a3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_chain_high_a3: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DipoleSection {
    pub dipole_debye: f64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GratingSection {
    pub period_d_nm: f64,
    pub slit_open_g1_nm: f64,
    pub slit_open_g3_nm: f64,
    pub spacing_l_mm: f64,
    pub laser_wavelength_nm: f64,
    pub laser_power_w: f64,
    pub laser_waist_um: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DeflectorSection {
    pub geometry_factor_k_per_m: f64,
    pub max_voltage_v: f64,
    #[serde(default = "default_field_homogeneity")]
    pub field_homogeneity: f64,
}

fn default_field_homogeneity() -> f64 {
    0.01
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VelocitySection {
    /// "gaussian" or "histogram".
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_mean_m_per_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fwhm_fraction: Option<f64>,
    /// (velocity m/s, weight) rows for kind = "histogram".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub voltages_v: Vec<f64>,
    pub ref_voltage_v: f64,
    pub grid_start_nm: f64,
    pub grid_step_nm: f64,
    pub grid_points: u32,
    pub rate_scale_counts_per_s: f64,
    pub integration_time_s: f64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Validate and convert to domain types (instrument units → SI happens here).
    pub fn to_experiment(&self) -> Result<Experiment> {
        let m = &self.molecule;
        let molecule = MoleculeSpec {
            name: m.name.clone(),
            mass_amu: m.mass_amu,
            alpha_stat: m.alpha_stat_a3,
            alpha_stat_uncertainty: m.alpha_stat_uncertainty_a3,
            alpha_opt: m.alpha_opt_a3,
            chi_true: m.chi_true_a3,
            dipole_model: m
                .dipole_model
                .iter()
                .map(|d| DipoleContribution {
                    magnitude_debye: d.dipole_debye,
                    multiplicity: d.multiplicity,
                })
                .collect(),
            internal_temperature_k: m.internal_temperature_k,
        };
        molecule.validate()?;

        let g = &self.gratings;
        if g.period_d_nm <= 0.0 {
            return Err(Error::Config("gratings.period_d_nm must be > 0".into()));
        }
        let gratings = GratingSet {
            period_d: g.period_d_nm * 1e-9,
            open_fraction_g1: g.slit_open_g1_nm / g.period_d_nm,
            open_fraction_g3: g.slit_open_g3_nm / g.period_d_nm,
            spacing_l: g.spacing_l_mm * 1e-3,
            laser_wavelength: g.laser_wavelength_nm * 1e-9,
            laser_power: g.laser_power_w,
            laser_waist: g.laser_waist_um * 1e-6,
        };
        gratings.validate()?;

        let deflector = DeflectorConfig {
            geometry_factor_k: self.deflector.geometry_factor_k_per_m,
            max_voltage: self.deflector.max_voltage_v,
            field_homogeneity: self.deflector.field_homogeneity,
        };
        deflector.validate()?;

        let v = &self.velocity;
        let vdist = match v.kind.as_str() {
            "gaussian" => {
                let mean = v.v_mean_m_per_s.ok_or_else(|| {
                    Error::Config("velocity.v_mean_m_per_s required for kind \"gaussian\"".into())
                })?;
                let fwhm = v.fwhm_fraction.ok_or_else(|| {
                    Error::Config("velocity.fwhm_fraction required for kind \"gaussian\"".into())
                })?;
                VelocityDistribution::gaussian(mean, fwhm)?
            }
            "histogram" => {
                let bins = v.bins.clone().ok_or_else(|| {
                    Error::Config("velocity.bins required for kind \"histogram\"".into())
                })?;
                VelocityDistribution::histogram(bins)?
            }
            other => {
                return Err(Error::Config(format!(
                    "velocity.kind must be \"gaussian\" or \"histogram\", got {other:?}"
                )))
            }
        };

        let s = &self.scan;
        if s.voltages_v.is_empty() {
            return Err(Error::Config("scan.voltages_v must not be empty".into()));
        }
        for &u in &s.voltages_v {
            if u < 0.0 || u > deflector.max_voltage {
                return Err(Error::Config(format!(
                    "scan voltage {u} V outside [0, {}] V",
                    deflector.max_voltage
                )));
            }
        }
        if s.ref_voltage_v < 0.0 || s.ref_voltage_v > deflector.max_voltage {
            return Err(Error::Config(format!(
                "scan.ref_voltage_v {} V outside [0, {}] V",
                s.ref_voltage_v, deflector.max_voltage
            )));
        }
        if s.grid_step_nm <= 0.0 {
            return Err(Error::Config("scan.grid_step_nm must be > 0".into()));
        }
        if s.grid_points < 6 {
            return Err(Error::Config(format!(
                "scan.grid_points must be >= 6, got {}",
                s.grid_points
            )));
        }
        if s.rate_scale_counts_per_s <= 0.0 || s.integration_time_s <= 0.0 {
            return Err(Error::Config(
                "scan.rate_scale_counts_per_s and scan.integration_time_s must be > 0".into(),
            ));
        }
        let grid: Vec<f64> = (0..s.grid_points)
            .map(|i| (s.grid_start_nm + i as f64 * s.grid_step_nm) * 1e-9)
            .collect();

        Ok(Experiment {
            molecule,
            gratings,
            deflector,
            vdist,
            protocol: ScanProtocol {
                voltages: s.voltages_v.clone(),
                ref_voltage: s.ref_voltage_v,
                grid,
                rate_scale: s.rate_scale_counts_per_s,
                integration_time: s.integration_time_s,
                master_seed: s.master_seed,
            },
        })
    }

    /// Non-fatal consistency checks, e.g. the dipole model against chi_true.
    pub fn consistency_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let m = &self.molecule;
        if !m.dipole_model.is_empty() {
            let contributions: Vec<(f64, u32)> = m
                .dipole_model
                .iter()
                .map(|d| (d.dipole_debye, d.multiplicity))
                .collect();
            if let Ok(ensemble) =
                DipoleEnsemble::from_additive_contributions(&contributions, m.internal_temperature_k)
            {
                if let Ok(chi) = chi_total(m.alpha_stat_a3, &ensemble) {
                    let rel = (chi - m.chi_true_a3).abs() / m.chi_true_a3.abs().max(1e-12);
                    if rel > 0.01 {
                        warnings.push(format!(
                            "molecule {:?}: dipole model plus alpha_stat gives chi_tot = {chi:.2} \
                             A3, but chi_true_a3 = {}",
                            m.name, m.chi_true_a3
                        ));
                    }
                }
            }
        }
        warnings
    }
}
