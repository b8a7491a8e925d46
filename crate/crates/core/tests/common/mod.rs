//! Shared builders for the integration suites: the two production molecule
//! configurations on the standard instrument.

use kdtl_core::beamline::{DeflectorConfig, VelocityDistribution};
use kdtl_core::fringe::GratingSet;
use kdtl_core::physics::MoleculeSpec;
use kdtl_core::pipeline::{Experiment, ScanProtocol};

pub fn standard_gratings(power: f64) -> GratingSet {
    GratingSet {
        period_d: 266e-9,
        open_fraction_g1: 100.0 / 266.0,
        open_fraction_g3: 100.0 / 266.0,
        spacing_l: 0.105,
        laser_wavelength: 532e-9,
        laser_power: power,
        laser_waist: 500e-6,
    }
}

pub fn standard_deflector() -> DeflectorConfig {
    DeflectorConfig {
        geometry_factor_k: 8.3e3,
        max_voltage: 12_000.0,
        field_homogeneity: 0.01,
    }
}

pub fn test_molecule(name: &str, chi: f64, alpha: f64) -> MoleculeSpec {
    MoleculeSpec {
        name: name.into(),
        mass_amu: 1592.0,
        alpha_stat: alpha,
        alpha_stat_uncertainty: 2.0,
        alpha_opt: alpha,
        chi_true: chi,
        dipole_model: vec![],
        internal_temperature_k: 458.0,
    }
}

pub fn standard_grid() -> Vec<f64> {
    (0..41).map(|i| i as f64 * 26e-9).collect()
}

/// Tetrahedral compound: v = 110 m/s, Δv/v = 0.15, χ = 102, α = 63.
pub fn compound1(seed: u64) -> Experiment {
    Experiment {
        molecule: test_molecule("compound1", 102.0, 63.0),
        gratings: standard_gratings(4.0),
        deflector: standard_deflector(),
        vdist: VelocityDistribution::gaussian(110.0, 0.15).unwrap(),
        protocol: protocol(seed),
    }
}

/// Rod-like compound: v = 91 m/s, Δv/v = 0.10, χ = 126, α = 70.
pub fn compound2(seed: u64) -> Experiment {
    Experiment {
        molecule: test_molecule("compound2", 126.0, 70.0),
        gratings: standard_gratings(5.0),
        deflector: standard_deflector(),
        vdist: VelocityDistribution::gaussian(91.0, 0.10).unwrap(),
        protocol: protocol(seed),
    }
}

pub fn protocol(seed: u64) -> ScanProtocol {
    ScanProtocol {
        voltages: (2..=10).map(|kv| kv as f64 * 1000.0).collect(),
        ref_voltage: 1000.0,
        grid: standard_grid(),
        rate_scale: 4200.0,
        integration_time: 1.0,
        master_seed: seed,
    }
}

#[allow(dead_code)]
pub fn pass(criterion: &str, details: &str) {
    println!("ACCEPTANCE {criterion}: PASS — {details}");
}

#[allow(dead_code)]
pub fn fail(criterion: &str, details: &str) -> ! {
    println!("ACCEPTANCE {criterion}: FAIL — {details}");
    panic!("{criterion} failed: {details}");
}

/// Check helper: prints the one-line verdict, panics on failure.
#[allow(dead_code)]
pub fn check(criterion: &str, ok: bool, details: &str) {
    if ok {
        pass(criterion, details);
    } else {
        fail(criterion, details);
    }
}
