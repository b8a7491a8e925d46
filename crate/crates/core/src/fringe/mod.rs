//! Single-velocity fringe pattern behind the third grating.
//!
//! Three gratings of equal period d: two absorptive masks (G1, G3) and a
//! standing-light-wave phase grating (G2) halfway between them, spacings L.
//! Scanning G3 across the molecular density pattern yields the sinusoidal
//! signal S(x₃) = O + A·sin(2π(x₃ − Δx₃)/d) whose offset O and amplitude A
//! this module computes. The analytic model keeps only the first harmonic;
//! [`oracle`] provides an independent full numerical propagation to check it.

pub mod oracle;

pub use oracle::numerical_oracle_fringe;

use crate::error::{Error, Result};
use crate::math::bessel;
use crate::physics::{de_broglie_wavelength, talbot_length, MoleculeSpec};
use crate::real::Real;

/// Geometry and laser parameters of the three-grating stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GratingSet<T: Real = f64> {
    /// Slit period shared by G1, G2, G3 (m).
    pub period_d: T,
    /// Open fraction of the first absorptive mask, in (0, 1).
    pub open_fraction_g1: T,
    /// Open fraction of the third absorptive mask, in (0, 1).
    pub open_fraction_g3: T,
    /// G1→G2 and G2→G3 spacing (m), equal by construction.
    pub spacing_l: T,
    /// Wavelength of the retro-reflected grating laser (m).
    pub laser_wavelength: T,
    /// Laser power (W).
    pub laser_power: T,
    /// Vertical 1/e² intensity radius of the laser beam (m).
    pub laser_waist: T,
}

impl<T: Real> GratingSet<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("period_d", self.period_d),
            ("spacing_l", self.spacing_l),
            ("laser_wavelength", self.laser_wavelength),
            ("laser_power", self.laser_power),
            ("laser_waist", self.laser_waist),
        ] {
            if v <= T::zero() || !v.is_finite() {
                return Err(Error::Config(format!("grating {name} must be > 0, got {v}")));
            }
        }
        for (name, f) in [
            ("open_fraction_g1", self.open_fraction_g1),
            ("open_fraction_g3", self.open_fraction_g3),
        ] {
            if f <= T::zero() || f >= T::one() {
                return Err(Error::Config(format!(
                    "grating {name} must lie in (0, 1), got {f}"
                )));
            }
        }
        Ok(())
    }
}

/// First-harmonic description of the detection signal.
///
/// `offset` and `amplitude` are transmissions per incident molecule
/// (dimensionless rates before detector scaling); `visibility = A/O`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeCoefficients<T: Real = f64> {
    pub offset: T,
    pub amplitude: T,
    pub visibility: T,
}

impl<T: Real> FringeCoefficients<T> {
    fn from_offset_amplitude(offset: T, amplitude: T) -> Self {
        // The first-harmonic truncation can formally overshoot A > O for
        // very small open fractions; clamp so V stays in [0, 1].
        let amplitude = amplitude.min(offset).max(T::zero());
        let visibility = if offset > T::zero() {
            amplitude / offset
        } else {
            T::zero()
        };
        Self {
            offset,
            amplitude,
            visibility,
        }
    }
}

/// Fourier coefficient c_n of an ideal binary mask with the given open
/// fraction: c_0 = f, c_n = sin(nπf)/(nπ) otherwise. Even in n.
pub fn binary_grating_fourier_coefficient<T: Real>(open_fraction: T, order: i32) -> Result<T> {
    if !(open_fraction > T::zero() && open_fraction < T::one()) {
        return Err(Error::Domain(format!(
            "binary grating open fraction must lie in (0, 1), got {open_fraction}"
        )));
    }
    if order == 0 {
        return Ok(open_fraction);
    }
    let n = T::from_i32(order.abs()).unwrap();
    Ok((n * T::PI() * open_fraction).sin() / (n * T::PI()))
}

/// Peak amplitude φ₀ of the sinusoidal phase imprinted on the matter wave by
/// the standing light wave, for a molecule crossing the beam at `velocity`.
///
/// Eikonal phase of a retro-reflected Gaussian beam (power P, vertical waist
/// w), crossed through its axis: φ(x) = 2φ₀·cos²(πx/d) with
///
///   φ₀ = κ · α_opt · P / (ħ c w v),   κ = 4·√(2π),
///
/// where α_opt is the optical polarizability as a bare volume (m³). The
/// prefactor κ collects the standing-wave intensity doubling and the
/// Gaussian chord integral; it is fixed here and nowhere else. Susceptibility
/// extraction never consumes φ₀, so an alternative beam convention could not
/// corrupt it.
pub fn phase_grating_modulation<T: Real>(
    molecule: &MoleculeSpec<T>,
    gratings: &GratingSet<T>,
    velocity: T,
) -> Result<T> {
    if velocity <= T::zero() || !velocity.is_finite() {
        return Err(Error::Domain(format!(
            "phase modulation needs velocity > 0, got {velocity} m/s"
        )));
    }
    let c = crate::constants::PhysicalConstants::<T>::codata2018();
    let kappa = T::of(4.0) * (T::of(2.0) * T::PI()).sqrt();
    let alpha_m3 = c.polvol_to_m3(molecule.alpha_opt);
    Ok(kappa * alpha_m3 * gratings.laser_power
        / (c.hbar * c.speed_of_light * gratings.laser_waist * velocity))
}

/// Talbot-Lau coefficient of the pure phase grating for detection harmonic m
/// in the symmetric equal-period geometry:
///
///   B_m = J_{2m}( 2·φ₀·sin(π·m·L/L_T) ),
///
/// the eikonal standing-wave result (Hornberger et al., New J. Phys. 11,
/// 043032 (2009)); it follows from Graf's addition theorem applied to the
/// order sum and is cross-checked against the numerical oracle rather than
/// trusted blindly. B_0 = 1 exactly: a phase grating absorbs nothing.
pub fn phase_grating_talbot_coefficient<T: Real>(m: u32, phi0: T, l_over_lt: T) -> T {
    let mf = T::from_u32(m).unwrap();
    let xi = T::of(2.0) * phi0 * (T::PI() * mf * l_over_lt).sin();
    bessel::bessel_j(2 * m, xi.abs())
}

/// Offset and *signed* first-harmonic amplitude at the given velocity:
/// O = c₀(f₁)·c₀(f₃), A₁ = 2·c₁(f₁)·c₁(f₃)·B₁(ξ) with ξ = 2φ₀·sin(πL/L_T).
/// A negative A₁ is a π phase flip of that velocity class's fringe; velocity
/// averaging must keep the sign or phase-flipped classes would add
/// constructively.
pub fn first_harmonic<T: Real>(
    molecule: &MoleculeSpec<T>,
    gratings: &GratingSet<T>,
    velocity: T,
) -> Result<(T, T)> {
    let lambda = de_broglie_wavelength(molecule.mass_amu, velocity)?;
    let lt = talbot_length(gratings.period_d, lambda)?;
    let tau = gratings.spacing_l / lt;
    let phi0 = phase_grating_modulation(molecule, gratings, velocity)?;

    let c0_g1 = binary_grating_fourier_coefficient(gratings.open_fraction_g1, 0)?;
    let c0_g3 = binary_grating_fourier_coefficient(gratings.open_fraction_g3, 0)?;
    let c1_g1 = binary_grating_fourier_coefficient(gratings.open_fraction_g1, 1)?;
    let c1_g3 = binary_grating_fourier_coefficient(gratings.open_fraction_g3, 1)?;

    let offset = c0_g1 * c0_g3;
    let b1 = phase_grating_talbot_coefficient(1, phi0, tau);
    Ok((offset, T::of(2.0) * c1_g1 * c1_g3 * b1))
}

/// First-harmonic Talbot-Lau pattern at the given velocity:
/// O = c₀(f₁)·c₀(f₃), A = 2·c₁(f₁)·c₁(f₃)·|B₁(ξ)| with ξ = 2φ₀·sin(πL/L_T).
/// Harmonics above the first are truncated, matching the strictly sinusoidal
/// fit model used downstream.
pub fn analytic_fringe<T: Real>(
    molecule: &MoleculeSpec<T>,
    gratings: &GratingSet<T>,
    velocity: T,
) -> Result<FringeCoefficients<T>> {
    let (offset, signed_amplitude) = first_harmonic(molecule, gratings, velocity)?;
    Ok(FringeCoefficients::from_offset_amplitude(
        offset,
        signed_amplitude.abs(),
    ))
}
