//! Elementary matter-wave relations and the molecular species description.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::real::Real;

/// de Broglie wavelength λ = h/(m·v) in meters.
///
/// `mass` in amu, `velocity` in m/s.
pub fn de_broglie_wavelength<T: Real>(mass_amu: T, velocity: T) -> Result<T> {
    if mass_amu <= T::zero() || !mass_amu.is_finite() {
        return Err(Error::Domain(format!(
            "de Broglie wavelength needs mass > 0, got {mass_amu} amu"
        )));
    }
    if velocity <= T::zero() || !velocity.is_finite() {
        return Err(Error::Domain(format!(
            "de Broglie wavelength needs velocity > 0, got {velocity} m/s"
        )));
    }
    let c = PhysicalConstants::<T>::codata2018();
    Ok(c.planck_h / (c.amu_to_kg(mass_amu) * velocity))
}

/// Near-field self-imaging distance L_T = d²/λ of a grating of period d.
pub fn talbot_length<T: Real>(grating_period: T, wavelength: T) -> Result<T> {
    if grating_period <= T::zero() || !grating_period.is_finite() {
        return Err(Error::Domain(format!(
            "Talbot length needs period > 0, got {grating_period} m"
        )));
    }
    if wavelength <= T::zero() || !wavelength.is_finite() {
        return Err(Error::Domain(format!(
            "Talbot length needs wavelength > 0, got {wavelength} m"
        )));
    }
    Ok(grating_period * grating_period / wavelength)
}

/// One thermally activated dipole contribution: a fluctuating dipole of the
/// given magnitude appearing `multiplicity` times in the molecule (e.g. once
/// per flexible side chain). Independent contributions add in ⟨d²⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleContribution<T: Real = f64> {
    pub magnitude_debye: T,
    pub multiplicity: u32,
}

/// The species under test.
///
/// Polarizabilities and susceptibility are in Å³·4πε₀; `chi_true` is the
/// ground truth the forward simulator deflects with, never something the
/// inference side is allowed to see.
#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec<T: Real = f64> {
    pub name: String,
    pub mass_amu: T,
    pub alpha_stat: T,
    /// Quoted uncertainty of the computed static polarizability (0 if unknown).
    pub alpha_stat_uncertainty: T,
    /// Optical polarizability at the grating-laser wavelength.
    pub alpha_opt: T,
    pub chi_true: T,
    pub dipole_model: Vec<DipoleContribution<T>>,
    pub internal_temperature_k: T,
}

impl<T: Real> MoleculeSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.mass_amu <= T::zero() {
            return Err(Error::Config(format!(
                "molecule {:?}: mass must be > 0, got {}",
                self.name, self.mass_amu
            )));
        }
        if self.alpha_stat < T::zero() || self.alpha_opt < T::zero() {
            return Err(Error::Config(format!(
                "molecule {:?}: polarizabilities must be >= 0",
                self.name
            )));
        }
        for d in &self.dipole_model {
            if d.magnitude_debye < T::zero() {
                return Err(Error::Config(format!(
                    "molecule {:?}: dipole magnitudes must be >= 0",
                    self.name
                )));
            }
        }
        if !self.dipole_model.is_empty()
            && self.internal_temperature_k > T::zero()
            && self.chi_true < self.alpha_stat
        {
            return Err(Error::Config(format!(
                "molecule {:?}: chi_true < alpha_stat is inconsistent with a thermal dipole model",
                self.name
            )));
        }
        Ok(())
    }

    /// Total mean-square dipole ⟨d²⟩ in Debye², summing independent
    /// contributions (variances of independent fluctuating dipoles add).
    pub fn mean_square_dipole_debye2(&self) -> T {
        self.dipole_model
            .iter()
            .map(|d| {
                d.magnitude_debye * d.magnitude_debye * T::from_u32(d.multiplicity).unwrap()
            })
            .sum()
    }
}
