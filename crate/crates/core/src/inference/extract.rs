//! Susceptibility extraction from differential shifts, and geometry-factor
//! calibration against a species of known susceptibility.

use crate::beamline::{
    effective_fringe_with_chi, effective_fringe_with_chi_unchecked, DeflectorConfig,
    VelocityDistribution,
};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fringe::GratingSet;
use crate::inference::shift::ShiftMeasurement;
use crate::physics::MoleculeSpec;

/// Upper end of the susceptibility root-find bracket (Å³·4πε₀).
pub const CHI_MAX: f64 = 1e4;

/// How the velocity distribution enters the shift model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtractionModel {
    /// Phase of the velocity-averaged complex fringe, including dephasing of
    /// the averaged pattern.
    #[default]
    AveragedPhase,
    /// Plain Δx₃ = K·χ·U²/(m·v_mean²) at the mean velocity.
    MeanVelocity,
}

/// A per-voltage susceptibility estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiEstimate {
    pub chi: f64,
    pub sigma_stat: f64,
    /// Both candidates when the input branch choice was ambiguous.
    pub ambiguous: Option<(f64, f64)>,
}

/// Model differential shift between `voltage` and `ref_voltage` for a trial χ.
/// Trial evaluations skip the quadrature convergence gate (the root-find
/// probes far into the dephased regime); `checked` applies it, and is run
/// once at every solution that gets reported.
#[allow(clippy::too_many_arguments)]
fn model_delta(
    chi: f64,
    voltage: f64,
    ref_voltage: f64,
    molecule: &MoleculeSpec,
    gratings: &GratingSet,
    deflector: &DeflectorConfig,
    vdist: &VelocityDistribution,
    model: ExtractionModel,
    checked: bool,
) -> Result<f64> {
    match model {
        ExtractionModel::AveragedPhase => {
            let eval = if checked {
                effective_fringe_with_chi
            } else {
                effective_fringe_with_chi_unchecked
            };
            let hi = eval(molecule, gratings, deflector, vdist, voltage, chi)?;
            let lo = eval(molecule, gratings, deflector, vdist, ref_voltage, chi)?;
            Ok(hi.shift - lo.shift)
        }
        ExtractionModel::MeanVelocity => {
            let c = PhysicalConstants::<f64>::codata2018();
            let v = vdist.mean_velocity();
            let k = deflector.geometry_factor_k;
            Ok(k * c.polvol_to_si(chi) * (voltage.powi(2) - ref_voltage.powi(2))
                / (c.amu_to_kg(molecule.mass_amu) * v * v))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_chi(
    delta: f64,
    voltage: f64,
    ref_voltage: f64,
    molecule: &MoleculeSpec,
    gratings: &GratingSet,
    deflector: &DeflectorConfig,
    vdist: &VelocityDistribution,
    model: ExtractionModel,
) -> Result<f64> {
    let f = |chi: f64| -> Result<f64> {
        Ok(model_delta(
            chi,
            voltage,
            ref_voltage,
            molecule,
            gratings,
            deflector,
            vdist,
            model,
            false,
        )? - delta)
    };
    let mut lo = 0.0;
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(0.0);
    }
    // Expand the upper bracket geometrically inside [0, CHI_MAX], so the
    // bisection stays near the physical root instead of starting deep in the
    // dephased regime.
    let mut hi = 8.0;
    let mut f_hi = f(hi)?;
    while f_hi.signum() == f_lo.signum() && hi < CHI_MAX {
        hi = (hi * 4.0).min(CHI_MAX);
        f_hi = f(hi)?;
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Extraction(format!(
            "no susceptibility in [0, {CHI_MAX}] reproduces a differential shift of {delta:e} m \
             between {voltage} V and {ref_voltage} V"
        )));
    }
    // Bisection to a tight bracket, then a few secant steps to polish.
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-8 * hi.abs().max(1.0) {
            break;
        }
    }
    let mut x0 = lo;
    let mut x1 = hi;
    let mut y0 = f(x0)?;
    let mut y1 = f(x1)?;
    for _ in 0..20 {
        if (x1 - x0).abs() <= 1e-10 * x1.abs().max(1e-10) || y1 == y0 {
            break;
        }
        let x2 = x1 - y1 * (x1 - x0) / (y1 - y0);
        if !x2.is_finite() {
            break;
        }
        x0 = x1;
        y0 = y1;
        x1 = x2.clamp(0.0, CHI_MAX);
        y1 = f(x1)?;
    }
    Ok(x1)
}

/// Solve for the single scalar χ whose model differential shift matches the
/// measurement; σ_stat propagates through the local derivative d(shift)/dχ.
#[allow(clippy::too_many_arguments)]
pub fn extract_chi_at_voltage(
    measurement: &ShiftMeasurement,
    voltage: f64,
    ref_voltage: f64,
    molecule: &MoleculeSpec,
    gratings: &GratingSet,
    deflector: &DeflectorConfig,
    vdist: &VelocityDistribution,
    model: ExtractionModel,
) -> Result<ChiEstimate> {
    if voltage == ref_voltage {
        return Err(Error::Extraction(
            "voltage and reference voltage must differ".into(),
        ));
    }
    let chi = solve_chi(
        measurement.delta,
        voltage,
        ref_voltage,
        molecule,
        gratings,
        deflector,
        vdist,
        model,
    )?;
    // The reported solution must pass the quadrature convergence gate.
    model_delta(
        chi,
        voltage,
        ref_voltage,
        molecule,
        gratings,
        deflector,
        vdist,
        model,
        true,
    )?;

    // d(shift)/dχ by central difference around the solution.
    let h = (chi.abs() * 1e-4).max(1e-3);
    let d_hi = model_delta(
        chi + h,
        voltage,
        ref_voltage,
        molecule,
        gratings,
        deflector,
        vdist,
        model,
        false,
    )?;
    let d_lo = model_delta(
        (chi - h).max(0.0),
        voltage,
        ref_voltage,
        molecule,
        gratings,
        deflector,
        vdist,
        model,
        false,
    )?;
    let slope = (d_hi - d_lo) / (h + h.min(chi));
    if slope.abs() <= 0.0 || !slope.is_finite() {
        return Err(Error::Extraction(
            "shift model is locally flat in chi; cannot propagate uncertainty".into(),
        ));
    }
    let sigma_stat = measurement.sigma / slope.abs();

    let ambiguous = match measurement.ambiguous {
        None => None,
        Some((a, b)) => {
            let chi_a = solve_chi(
                a, voltage, ref_voltage, molecule, gratings, deflector, vdist, model,
            )?;
            let chi_b = solve_chi(
                b, voltage, ref_voltage, molecule, gratings, deflector, vdist, model,
            )
            .unwrap_or(f64::NAN);
            Some((chi_a, chi_b))
        }
    };
    Ok(ChiEstimate {
        chi,
        sigma_stat,
        ambiguous,
    })
}

/// Calibration output: the fitted geometry factor and its diagnostics.
#[derive(Debug, Clone)]
pub struct CalibrationResult {
    pub deflector: DeflectorConfig,
    pub sigma_k: f64,
    pub chi_squared_reduced: f64,
    pub per_voltage: Vec<(f64, f64, f64)>, // (voltage, K, sigma_K)
    pub notes: Vec<String>,
}

/// Weighted least squares for the geometry factor K over all voltage rungs of
/// a calibration species with known susceptibility. Each rung yields its own
/// K by the same root-find used for χ (the model depends only on the product
/// K·χ); the rungs combine by inverse variance, and their scatter is reported
/// as a reduced χ².
#[allow(clippy::too_many_arguments)]
pub fn calibrate_geometry_factor(
    rungs: &[(f64, ShiftMeasurement)],
    ref_voltage: f64,
    known_chi: f64,
    molecule: &MoleculeSpec,
    gratings: &GratingSet,
    deflector_template: &DeflectorConfig,
    vdist: &VelocityDistribution,
    model: ExtractionModel,
) -> Result<CalibrationResult> {
    if known_chi <= 0.0 {
        return Err(Error::Calibration(format!(
            "known susceptibility must be > 0, got {known_chi}"
        )));
    }
    let mut voltages: Vec<f64> = rungs.iter().map(|r| r.0).collect();
    voltages.sort_by(f64::total_cmp);
    voltages.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if voltages.len() < 2 {
        return Err(Error::Calibration(
            "calibration needs scans at two or more distinct voltages".into(),
        ));
    }

    let mut per_voltage = Vec::with_capacity(rungs.len());
    for (voltage, m) in rungs {
        // Extract the product K·χ via a trial χ under the template K, then
        // rescale: model(K_template, χ̂) = model(K̂, known_chi) with
        // K̂ = K_template·χ̂/known_chi, exactly (the model sees only K·χ).
        let est = extract_chi_at_voltage(
            m,
            *voltage,
            ref_voltage,
            molecule,
            gratings,
            deflector_template,
            vdist,
            model,
        )?;
        let k = deflector_template.geometry_factor_k * est.chi / known_chi;
        let sigma_k = deflector_template.geometry_factor_k * est.sigma_stat / known_chi;
        per_voltage.push((*voltage, k, sigma_k));
    }

    let mut wsum = 0.0;
    let mut ksum = 0.0;
    for &(_, k, s) in &per_voltage {
        let w = 1.0 / (s * s).max(1e-300);
        wsum += w;
        ksum += w * k;
    }
    let k_mean = ksum / wsum;
    let sigma_k = (1.0 / wsum).sqrt();
    let dof = (per_voltage.len() - 1).max(1) as f64;
    let chi2_red = per_voltage
        .iter()
        .map(|&(_, k, s)| ((k - k_mean) / s).powi(2))
        .sum::<f64>()
        / dof;

    let mut notes = vec![format!(
        "geometry factor K = {k_mean:.6e} ± {sigma_k:.2e} 1/m from {} voltages, reduced chi2 {chi2_red:.3}",
        per_voltage.len()
    )];
    if chi2_red > 5.0 {
        notes.push(format!(
            "calibration rungs disagree (reduced chi2 {chi2_red:.1}); scans may mix geometries"
        ));
    }
    Ok(CalibrationResult {
        deflector: DeflectorConfig {
            geometry_factor_k: k_mean,
            ..*deflector_template
        },
        sigma_k,
        chi_squared_reduced: chi2_red,
        per_voltage,
        notes,
    })
}
