//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Internal computation is in SI. Public interfaces speak the instrument's
//! units — amu, m/s, V, Debye, and the polarizability volume "Å³·4πε₀" —
//! and conversion happens exactly once, here.

use crate::real::Real;

/// Planck constant h (J·s). Exact since the 2019 SI redefinition.
pub const PLANCK_H: f64 = 6.62607015e-34;

/// Reduced Planck constant ħ = h/2π (J·s).
pub const HBAR: f64 = PLANCK_H / (2.0 * std::f64::consts::PI);

/// Speed of light in vacuum c (m/s). Exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant k_B (J/K). Exact.
pub const BOLTZMANN_KB: f64 = 1.380649e-23;

/// Atomic mass unit (kg). CODATA 2018: 1.660 539 066 60(50)e-27.
pub const ATOMIC_MASS_UNIT: f64 = 1.66053906660e-27;

/// Vacuum permittivity ε₀ (F/m). CODATA 2018: 8.854 187 8128(13)e-12.
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

/// One polarizability volume unit, Å³·4πε₀, in SI polarizability (C·m²/V).
pub const POLARIZABILITY_VOLUME_SI: f64 = 4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY * 1e-30;

/// One Debye in SI (C·m): 1 D = 1e-21/c.
pub const DEBYE_SI: f64 = 1e-21 / SPEED_OF_LIGHT;

/// The constants bundle used by every physics routine, in the working scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T: Real = f64> {
    pub planck_h: T,
    pub hbar: T,
    pub speed_of_light: T,
    pub boltzmann_kb: T,
    pub atomic_mass_unit: T,
    pub vacuum_permittivity: T,
    /// Conversion factor between Å³·4πε₀ and SI C·m²/V.
    pub polarizability_volume_si: T,
    pub debye_si: T,
}

impl<T: Real> PhysicalConstants<T> {
    /// CODATA 2018 values, fixed in source for bit-reproducible output.
    pub fn codata2018() -> Self {
        Self {
            planck_h: T::of(PLANCK_H),
            hbar: T::of(HBAR),
            speed_of_light: T::of(SPEED_OF_LIGHT),
            boltzmann_kb: T::of(BOLTZMANN_KB),
            atomic_mass_unit: T::of(ATOMIC_MASS_UNIT),
            vacuum_permittivity: T::of(VACUUM_PERMITTIVITY),
            polarizability_volume_si: T::of(POLARIZABILITY_VOLUME_SI),
            debye_si: T::of(DEBYE_SI),
        }
    }

    pub fn amu_to_kg(&self, mass_amu: T) -> T {
        mass_amu * self.atomic_mass_unit
    }

    pub fn kg_to_amu(&self, mass_kg: T) -> T {
        mass_kg / self.atomic_mass_unit
    }

    /// Å³·4πε₀ → SI polarizability (C·m²/V).
    pub fn polvol_to_si(&self, polvol: T) -> T {
        polvol * self.polarizability_volume_si
    }

    /// SI polarizability (C·m²/V) → Å³·4πε₀.
    pub fn si_to_polvol(&self, si: T) -> T {
        si / self.polarizability_volume_si
    }

    /// Å³·4πε₀ → bare volume in m³ (divide out 4πε₀).
    pub fn polvol_to_m3(&self, polvol: T) -> T {
        polvol * T::of(1e-30)
    }

    pub fn debye_to_si(&self, dipole_debye: T) -> T {
        dipole_debye * self.debye_si
    }

    pub fn si_to_debye(&self, dipole_si: T) -> T {
        dipole_si / self.debye_si
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata2018()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_positive() {
        let c = PhysicalConstants::<f64>::codata2018();
        for v in [
            c.planck_h,
            c.hbar,
            c.speed_of_light,
            c.boltzmann_kb,
            c.atomic_mass_unit,
            c.vacuum_permittivity,
            c.polarizability_volume_si,
            c.debye_si,
        ] {
            assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn hbar_consistent_with_h() {
        let expected = PLANCK_H / std::f64::consts::TAU;
        assert!((HBAR - expected).abs() / expected < 1e-15);
    }

    #[test]
    fn debye_is_1e21_over_c() {
        assert!((DEBYE_SI - 1e-21 / 299_792_458.0).abs() / DEBYE_SI < 1e-15);
        // ~3.3356e-30 C·m
        assert!((DEBYE_SI - 3.33564095e-30).abs() / DEBYE_SI < 1e-8);
    }

    #[test]
    fn polarizability_volume_magnitude() {
        // 4π·ε₀·1Å³ ≈ 1.112650e-40 C·m²/V
        assert!((POLARIZABILITY_VOLUME_SI - 1.11265e-40).abs() / POLARIZABILITY_VOLUME_SI < 1e-5);
    }

    #[test]
    fn unit_round_trips_are_identities() {
        let c = PhysicalConstants::<f64>::codata2018();
        for x in [1.0, 63.0, 126.0, 1592.0, 3.2595e-3] {
            assert!((c.kg_to_amu(c.amu_to_kg(x)) - x).abs() / x < 1e-12);
            assert!((c.si_to_polvol(c.polvol_to_si(x)) - x).abs() / x < 1e-12);
            assert!((c.si_to_debye(c.debye_to_si(x)) - x).abs() / x < 1e-12);
        }
    }

    #[test]
    fn round_trips_hold_in_f32_too() {
        let c = PhysicalConstants::<f32>::codata2018();
        let x = 126.0_f32;
        assert!((c.si_to_polvol(c.polvol_to_si(x)) - x).abs() / x < 1e-5);
    }
}
