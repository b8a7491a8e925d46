//! The four subcommands, built on the library pipeline.

use std::fs;
use std::path::{Path, PathBuf};

use kdtl_core::inference::{ExclusionRule, ExtractionModel};
use kdtl_core::io::calibration::CalibrationFile;
use kdtl_core::io::config::ExperimentConfig;
use kdtl_core::io::estimate::{write_estimate_csv, EstimateFile};
use kdtl_core::io::manifest::{fnv1a64_hex, ScanManifest, ScanPairEntry};
use kdtl_core::io::report::build_report;
use kdtl_core::io::scan_csv::{parse_scan_csv, parse_vdist_csv, write_scan_csv};
use kdtl_core::pipeline::{
    self, calibrate_all, estimate_file, fit_all, simulate_all, Experiment, FitOptions,
};
use kdtl_core::{Error, Result};

use crate::logging::{debug, info};

/// Load and validate a configuration, returning the experiment, the raw file
/// hash, and the parsed file for metadata.
fn load_experiment(
    config_path: &str,
    seed_override: Option<u64>,
    vdist_file: Option<&str>,
) -> Result<(Experiment, String, ExperimentConfig)> {
    let bytes = fs::read(config_path)
        .map_err(|e| Error::Config(format!("cannot read config {config_path}: {e}")))?;
    let cfg = ExperimentConfig::from_json(
        std::str::from_utf8(&bytes)
            .map_err(|e| Error::Config(format!("config {config_path} is not UTF-8: {e}")))?,
    )?;
    let mut experiment = cfg.to_experiment()?;
    for warning in cfg.consistency_warnings() {
        info!("kdtl: warning: {warning}");
    }
    if let Some(seed) = seed_override {
        experiment.protocol.master_seed = seed;
    }
    if let Some(path) = vdist_file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read vdist file {path}: {e}")))?;
        experiment.vdist = parse_vdist_csv(&text)?;
        info!("kdtl: velocity distribution replaced from {path}");
    }
    Ok((experiment, fnv1a64_hex(&bytes), cfg))
}

fn scan_file_names(voltage: f64) -> (String, String) {
    let tag = voltage.round() as u64;
    (
        format!("scan_{tag:06}V_signal.csv"),
        format!("scan_{tag:06}V_reference.csv"),
    )
}

pub fn simulate(
    config_path: &str,
    out_dir: &str,
    seed_override: Option<u64>,
    vdist_file: Option<&str>,
) -> Result<()> {
    let (experiment, config_hash, _) = load_experiment(config_path, seed_override, vdist_file)?;
    fs::create_dir_all(out_dir)?;

    let pairs = simulate_all(&experiment)?;
    let mut entries = Vec::with_capacity(pairs.len());
    for (signal, reference) in &pairs {
        let (signal_file, reference_file) = scan_file_names(signal.voltage);
        fs::write(Path::new(out_dir).join(&signal_file), write_scan_csv(signal))?;
        fs::write(
            Path::new(out_dir).join(&reference_file),
            write_scan_csv(reference),
        )?;
        debug!(
            "kdtl: wrote {signal_file} and {reference_file} ({} points each)",
            signal.positions.len()
        );
        entries.push(ScanPairEntry {
            voltage_v: signal.voltage,
            signal_file,
            reference_file,
        });
    }
    let manifest = ScanManifest {
        config_hash,
        molecule_name: experiment.molecule.name.clone(),
        master_seed: experiment.protocol.master_seed,
        ref_voltage_v: experiment.protocol.ref_voltage,
        integration_time_s: experiment.protocol.integration_time,
        pairs: entries,
    };
    fs::write(Path::new(out_dir).join("manifest.json"), manifest.to_json())?;
    info!(
        "kdtl: simulated {} scan pairs for {} into {out_dir}",
        pairs.len(),
        experiment.molecule.name
    );
    Ok(())
}

fn load_pairs(scan_dir: &str) -> Result<(ScanManifest, Vec<pipeline::ScanPair>)> {
    let manifest_path = Path::new(scan_dir).join("manifest.json");
    let manifest_text = fs::read_to_string(&manifest_path).map_err(|e| {
        Error::Config(format!(
            "cannot read manifest {}: {e}",
            manifest_path.display()
        ))
    })?;
    let manifest = ScanManifest::from_json(&manifest_text)?;
    let mut pairs = Vec::with_capacity(manifest.pairs.len());
    for entry in &manifest.pairs {
        let load = |name: &str, role: &str| -> Result<kdtl_core::FringeScan> {
            let path = Path::new(scan_dir).join(name);
            let text = fs::read_to_string(&path).map_err(|_| {
                Error::Config(format!(
                    "missing {role} scan for {} V: {}",
                    entry.voltage_v,
                    path.display()
                ))
            })?;
            let mut scan = parse_scan_csv(&text)?;
            scan.molecule_name = manifest.molecule_name.clone();
            scan.integration_time = manifest.integration_time_s;
            Ok(scan)
        };
        let signal = load(&entry.signal_file, "signal")?;
        let reference = load(&entry.reference_file, "reference")?;
        pairs.push((signal, reference));
    }
    Ok((manifest, pairs))
}

#[allow(clippy::too_many_arguments)]
pub fn fit(
    scan_dir: &str,
    config_path: &str,
    out_dir: &str,
    exclude_voltages: &[f64],
    visibility_threshold: f64,
    model: &str,
    vdist_file: Option<&str>,
) -> Result<()> {
    let (experiment, config_hash, cfg) = load_experiment(config_path, None, vdist_file)?;
    let (manifest, pairs) = load_pairs(scan_dir)?;
    if manifest.config_hash != config_hash {
        info!(
            "kdtl: warning: scans were simulated under config {} but fitting with {}",
            manifest.config_hash, config_hash
        );
    }

    let model = match model {
        "averaged-phase" => ExtractionModel::AveragedPhase,
        "mean-velocity" => ExtractionModel::MeanVelocity,
        other => {
            return Err(Error::Config(format!(
                "unknown model {other:?}; use \"averaged-phase\" or \"mean-velocity\""
            )))
        }
    };
    let exclusion = if exclude_voltages.is_empty() {
        ExclusionRule::VisibilityRatioBelow(visibility_threshold)
    } else {
        ExclusionRule::Both {
            voltages: exclude_voltages.to_vec(),
            threshold: visibility_threshold,
        }
    };
    let options = FitOptions {
        exclusion,
        model,
        with_systematics: true,
    };
    let outcome = fit_all(&pairs, &experiment, &options)?;

    let side_chain = match (
        cfg.molecule.side_chain_count,
        cfg.molecule.side_chain_low_a3,
        cfg.molecule.side_chain_high_a3,
    ) {
        (Some(n), Some(lo), Some(hi)) => Some((n, lo, hi)),
        _ => None,
    };
    let estimate = estimate_file(&outcome, &experiment, side_chain, config_hash);

    fs::create_dir_all(out_dir)?;
    fs::write(Path::new(out_dir).join("estimate.json"), estimate.to_json())?;
    fs::write(
        Path::new(out_dir).join("per_voltage.csv"),
        write_estimate_csv(&estimate),
    )?;
    for warning in &estimate.warnings {
        info!("kdtl: warning: {warning}");
    }
    info!(
        "kdtl: {} chi = {:.3} ± {:.3} A3·4πε0 ({} of {} voltages included)",
        estimate.molecule_name,
        estimate.weighted_mean_chi_a3,
        estimate.weighted_mean_sigma_a3,
        estimate.per_voltage.iter().filter(|r| r.included).count(),
        estimate.per_voltage.len()
    );
    Ok(())
}

pub fn calibrate(
    scan_dir: &str,
    config_path: &str,
    known_chi: f64,
    out_dir: &str,
    vdist_file: Option<&str>,
) -> Result<()> {
    if known_chi <= 0.0 {
        return Err(Error::Config(format!(
            "--known-chi must be > 0, got {known_chi}"
        )));
    }
    let (experiment, config_hash, _) = load_experiment(config_path, None, vdist_file)?;
    let (_, pairs) = load_pairs(scan_dir)?;
    let result = calibrate_all(&pairs, &experiment, known_chi, ExtractionModel::AveragedPhase)?;
    let file = CalibrationFile::new(&result, known_chi, config_hash);
    fs::create_dir_all(out_dir)?;
    fs::write(Path::new(out_dir).join("deflector.json"), file.to_json())?;
    info!(
        "kdtl: geometry factor K = {:.6e} ± {:.2e} 1/m (reduced chi2 {:.3})",
        file.geometry_factor_k_per_m, file.sigma_k_per_m, file.chi_squared_reduced
    );
    Ok(())
}

pub fn report(estimate_paths: &[String], out: &str) -> Result<()> {
    if estimate_paths.len() < 2 {
        return Err(Error::Config(format!(
            "report needs at least 2 estimate files, got {}",
            estimate_paths.len()
        )));
    }
    let mut estimates = Vec::with_capacity(estimate_paths.len());
    for path in estimate_paths {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read estimate {path}: {e}")))?;
        estimates.push(EstimateFile::from_json(&text)?);
    }
    let report = build_report(&estimates)?;
    if let Some(parent) = PathBuf::from(out).parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(out, report.to_json())?;
    for pair in &report.pairwise {
        info!(
            "kdtl: {} vs {}: separation {:.1}σ{}",
            pair.molecule_a,
            pair.molecule_b,
            pair.separation_sigma,
            if pair.distinguishable {
                " (distinguishable)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
