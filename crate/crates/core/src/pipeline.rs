//! End-to-end orchestration: synthesize scan sets, run the inverse pipeline,
//! calibrate, and assemble estimate files.

use rayon::prelude::*;

use crate::beamline::{scan_stream_seed, synthesize_scan, FringeScan, VelocityDistribution};
use crate::beamline::DeflectorConfig;
use crate::error::{Error, Result};
use crate::fringe::GratingSet;
use crate::inference::{
    aggregate_weighted_mean, calibrate_geometry_factor, extract_chi_at_voltage, fit_sinusoid,
    unwrap_staircase, CalibrationResult, ExclusionRule, ExtractionModel, StaircaseRung,
    SusceptibilityEstimate, UnwrappedShift, VoltageEntry,
};
use crate::io::estimate::{EstimateFile, PerVoltageRow, SensitivityRow};
use crate::physics::MoleculeSpec;

/// Everything the forward and inverse pipelines need, in domain units.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub molecule: MoleculeSpec,
    pub gratings: GratingSet,
    pub deflector: DeflectorConfig,
    pub vdist: VelocityDistribution,
    pub protocol: ScanProtocol,
}

#[derive(Debug, Clone)]
pub struct ScanProtocol {
    pub voltages: Vec<f64>,
    pub ref_voltage: f64,
    /// Third-grating positions (m).
    pub grid: Vec<f64>,
    pub rate_scale: f64,
    pub integration_time: f64,
    pub master_seed: u64,
}

/// A signal scan and the reference-voltage scan taken with it.
pub type ScanPair = (FringeScan, FringeScan);

/// Synthesize the full (signal, reference) scan set. Pairs are produced
/// concurrently; seeds derive from (master seed, voltage index, kind), so the
/// output is identical to a serial run.
pub fn simulate_all(exp: &Experiment) -> Result<Vec<ScanPair>> {
    let p = &exp.protocol;
    p.voltages
        .par_iter()
        .enumerate()
        .map(|(idx, &voltage)| {
            let signal = synthesize_scan(
                &exp.molecule,
                &exp.gratings,
                &exp.deflector,
                &exp.vdist,
                voltage,
                &p.grid,
                p.rate_scale,
                p.integration_time,
                scan_stream_seed(p.master_seed, idx as u32, false),
                false,
            )?;
            let reference = synthesize_scan(
                &exp.molecule,
                &exp.gratings,
                &exp.deflector,
                &exp.vdist,
                p.ref_voltage,
                &p.grid,
                p.rate_scale,
                p.integration_time,
                scan_stream_seed(p.master_seed, idx as u32, true),
                true,
            )?;
            Ok((signal, reference))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub exclusion: ExclusionRule,
    pub model: ExtractionModel,
    /// Compute the finite-difference sensitivity table (three extra pipeline
    /// passes).
    pub with_systematics: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            exclusion: ExclusionRule::VisibilityRatioBelow(
                ExclusionRule::DEFAULT_VISIBILITY_THRESHOLD,
            ),
            model: ExtractionModel::AveragedPhase,
            with_systematics: true,
        }
    }
}

/// The fit pipeline product, before serialization.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub estimate: SusceptibilityEstimate,
    pub per_voltage: Vec<PerVoltageRow>,
    pub systematics: Vec<SensitivityRow>,
    pub chi_mean_velocity_model: Option<f64>,
    pub warnings: Vec<String>,
}

fn extract_entries(
    shifts: &[UnwrappedShift],
    exp: &Experiment,
    vdist: &VelocityDistribution,
    gratings: &GratingSet,
    model: ExtractionModel,
) -> Result<Vec<VoltageEntry>> {
    shifts
        .par_iter()
        .map(|s| {
            let est = extract_chi_at_voltage(
                &s.measurement,
                s.voltage,
                exp.protocol.ref_voltage,
                &exp.molecule,
                gratings,
                &exp.deflector,
                vdist,
                model,
            )?;
            Ok(VoltageEntry {
                voltage: s.voltage,
                chi: est.chi,
                sigma_stat: est.sigma_stat,
                visibility_ratio: Some(s.visibility_ratio),
            })
        })
        .collect()
}

/// Fit every pair, unwrap the staircase, extract χ per voltage and aggregate.
pub fn fit_all(pairs: &[ScanPair], exp: &Experiment, options: &FitOptions) -> Result<FitOutcome> {
    if pairs.is_empty() {
        return Err(Error::Config("no scan pairs to fit".into()));
    }
    let d = exp.gratings.period_d;
    let rungs: Vec<StaircaseRung> = pairs
        .par_iter()
        .map(|(signal, reference)| {
            Ok(StaircaseRung {
                voltage: signal.voltage,
                fit: fit_sinusoid(signal, d)?,
                reference_fit: fit_sinusoid(reference, d)?,
            })
        })
        .collect::<Result<_>>()?;
    let shifts = unwrap_staircase(&rungs, exp.protocol.ref_voltage)?;

    let mut warnings: Vec<String> = Vec::new();
    for s in &shifts {
        if let Some((a, b)) = s.measurement.ambiguous {
            warnings.push(format!(
                "ambiguous phase unwrap at {} V: branches {a:e} m and {b:e} m",
                s.voltage
            ));
        }
    }
    for r in &rungs {
        if r.fit.low_contrast {
            warnings.push(format!("low-contrast fit at {} V", r.voltage));
        }
    }

    let entries = extract_entries(&shifts, exp, &exp.vdist, &exp.gratings, options.model)?;
    let estimate = aggregate_weighted_mean(&entries, &options.exclusion)?;

    // Comparison number under the alternative shift model.
    let other_model = match options.model {
        ExtractionModel::AveragedPhase => ExtractionModel::MeanVelocity,
        ExtractionModel::MeanVelocity => ExtractionModel::AveragedPhase,
    };
    let chi_mean_velocity_model =
        extract_entries(&shifts, exp, &exp.vdist, &exp.gratings, other_model)
            .and_then(|e| aggregate_weighted_mean(&e, &options.exclusion))
            .ok()
            .map(|e| e.weighted_mean_chi);

    let systematics = if options.with_systematics {
        sensitivity_table(&shifts, exp, options, estimate.weighted_mean_chi)?
    } else {
        Vec::new()
    };

    let per_voltage = estimate
        .per_voltage
        .iter()
        .map(|&(voltage, chi, sigma, included)| PerVoltageRow {
            voltage_v: voltage,
            chi_a3: chi,
            sigma_a3: sigma,
            included,
            visibility_ratio: shifts
                .iter()
                .find(|s| s.voltage == voltage)
                .map(|s| s.visibility_ratio),
        })
        .collect();

    Ok(FitOutcome {
        estimate,
        per_voltage,
        systematics,
        chi_mean_velocity_model,
        warnings,
    })
}

fn scale_vdist(vdist: &VelocityDistribution, factor: f64) -> VelocityDistribution {
    match vdist {
        VelocityDistribution::Gaussian {
            v_mean,
            fwhm_fraction,
        } => VelocityDistribution::Gaussian {
            v_mean: v_mean * factor,
            fwhm_fraction: *fwhm_fraction,
        },
        VelocityDistribution::Histogram { bins } => VelocityDistribution::Histogram {
            bins: bins.iter().map(|&(v, w)| (v * factor, w)).collect(),
        },
    }
}

/// Fractional sensitivity of the weighted mean to the dominant systematic
/// sources, by finite-difference re-extraction from the same fitted shifts:
/// mean velocity, laser power, laser waist (each +1%), plus the quadratic
/// bound from the quoted field inhomogeneity.
fn sensitivity_table(
    shifts: &[UnwrappedShift],
    exp: &Experiment,
    options: &FitOptions,
    chi_baseline: f64,
) -> Result<Vec<SensitivityRow>> {
    const BUMP: f64 = 0.01;
    let mut rows = Vec::new();

    let mut eval = |parameter: &str,
                    vdist: VelocityDistribution,
                    gratings: GratingSet|
     -> Result<()> {
        let entries = extract_entries(shifts, exp, &vdist, &gratings, options.model)?;
        let est = aggregate_weighted_mean(&entries, &options.exclusion)?;
        rows.push(SensitivityRow {
            parameter: parameter.into(),
            fractional_perturbation: BUMP,
            fractional_chi_change: (est.weighted_mean_chi - chi_baseline) / chi_baseline,
        });
        Ok(())
    };

    eval(
        "v_mean",
        scale_vdist(&exp.vdist, 1.0 + BUMP),
        exp.gratings,
    )?;
    let mut g_power = exp.gratings;
    g_power.laser_power *= 1.0 + BUMP;
    eval("laser_power", exp.vdist.clone(), g_power)?;
    let mut g_waist = exp.gratings;
    g_waist.laser_waist *= 1.0 + BUMP;
    eval("laser_waist", exp.vdist.clone(), g_waist)?;

    // Field inhomogeneity enters the shift quadratically in the field; its
    // quoted bound propagates as a 2x bound on χ, not a model term.
    rows.push(SensitivityRow {
        parameter: "field_homogeneity_bound".into(),
        fractional_perturbation: exp.deflector.field_homogeneity,
        fractional_chi_change: 2.0 * exp.deflector.field_homogeneity,
    });
    Ok(rows)
}

/// Calibrate the deflector geometry factor from scans of a species with known
/// susceptibility.
pub fn calibrate_all(
    pairs: &[ScanPair],
    exp: &Experiment,
    known_chi: f64,
    model: ExtractionModel,
) -> Result<CalibrationResult> {
    if pairs.is_empty() {
        return Err(Error::Calibration("no scan pairs to calibrate from".into()));
    }
    let d = exp.gratings.period_d;
    let rungs: Vec<StaircaseRung> = pairs
        .par_iter()
        .map(|(signal, reference)| {
            Ok(StaircaseRung {
                voltage: signal.voltage,
                fit: fit_sinusoid(signal, d)?,
                reference_fit: fit_sinusoid(reference, d)?,
            })
        })
        .collect::<Result<_>>()?;
    let shifts = unwrap_staircase(&rungs, exp.protocol.ref_voltage)?;
    let measurements: Vec<(f64, crate::inference::ShiftMeasurement)> =
        shifts.iter().map(|s| (s.voltage, s.measurement)).collect();
    calibrate_geometry_factor(
        &measurements,
        exp.protocol.ref_voltage,
        known_chi,
        &exp.molecule,
        &exp.gratings,
        &exp.deflector,
        &exp.vdist,
        model,
    )
}

/// Assemble the estimate file from a fit outcome and the molecule metadata.
pub fn estimate_file(
    outcome: &FitOutcome,
    exp: &Experiment,
    side_chain: Option<(u32, f64, f64)>,
    config_hash: String,
) -> EstimateFile {
    EstimateFile {
        molecule_name: exp.molecule.name.clone(),
        alpha_stat_a3: exp.molecule.alpha_stat,
        alpha_stat_uncertainty_a3: exp.molecule.alpha_stat_uncertainty,
        internal_temperature_k: exp.molecule.internal_temperature_k,
        side_chain_count: side_chain.map(|s| s.0),
        side_chain_low_a3: side_chain.map(|s| s.1),
        side_chain_high_a3: side_chain.map(|s| s.2),
        weighted_mean_chi_a3: outcome.estimate.weighted_mean_chi,
        weighted_mean_sigma_a3: outcome.estimate.weighted_mean_sigma,
        chi_mean_velocity_model_a3: outcome.chi_mean_velocity_model,
        per_voltage: outcome.per_voltage.clone(),
        systematics: outcome.systematics.clone(),
        warnings: outcome.warnings.clone(),
        config_hash,
    }
}
