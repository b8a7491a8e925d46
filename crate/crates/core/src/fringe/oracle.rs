//! Independent numerical validation of the analytic fringe model.
//!
//! Direct coherent summation, no Talbot-Lau theory: every open point of G1
//! is a mutually incoherent monochromatic point source whose paraxial
//! spherical wave passes the complex transmission of G2 and lands on a
//! sampled screen at the G3 plane. The incoherent density is masked by G3
//! and the transmitted flux, as a function of G3 offset, is reduced to its
//! mean and first harmonic by Fourier projection at period d.
//!
//! For a source at x₁ and screen point x₃ the two-segment Fresnel kernel
//! collapses (after completing the square, with u measured from the
//! stationary point (x₁+x₃)/2) to
//!
//!   ψ(x₃; x₁) ∝ ∫ t₂((x₁+x₃)/2 + u) · exp(2πi·u²/(λL)) du,
//!
//! which is what the inner loop evaluates on a shared grid, apodized at the
//! window edges to suppress truncation ringing. The G3 masking is applied in
//! Fourier space: the detected harmonic m picks up c_m(f₃) times the m-th
//! projection of the incoherent density, so only the ν = 0 and ν = 1/d
//! projections are accumulated, under a Hann window against spectral leakage
//! from the half-period moiré components of the finite source ensemble.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fringe::{
    binary_grating_fourier_coefficient, phase_grating_modulation, FringeCoefficients, GratingSet,
};
use crate::physics::{de_broglie_wavelength, MoleculeSpec};
use crate::real::Real;

/// Deterministic pairwise tree sum; the reduction order is fixed by the
/// source index, so parallel and serial runs are bit-identical.
fn pairwise_sum<T: Real>(v: &[(T, Complex<T>)]) -> (T, Complex<T>) {
    match v.len() {
        0 => (T::zero(), Complex::new(T::zero(), T::zero())),
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            let (s0, c0) = pairwise_sum(a);
            let (s1, c1) = pairwise_sum(b);
            (s0 + s1, c0 + c1)
        }
    }
}

struct Source<T> {
    /// Position on the shared grid, as an even index (x₁ = index·du).
    grid_index: i64,
    /// Boundary-corrected rectangle weight of this sample of the open slit.
    weight: T,
}

/// Brute-force fringe coefficients at a single velocity.
///
/// `slits_per_side` controls the extent of the incoherent source ensemble
/// (2·slits_per_side+1 slits of G1); `samples` is the number of quadrature
/// points across the diffraction window at G2. Insufficient sampling for the
/// geometry is rejected with a configuration error naming the minimum.
pub fn numerical_oracle_fringe<T: Real>(
    molecule: &MoleculeSpec<T>,
    gratings: &GratingSet<T>,
    velocity: T,
    slits_per_side: u32,
    samples: u32,
) -> Result<FringeCoefficients<T>> {
    if slits_per_side < 5 {
        return Err(Error::Config(format!(
            "oracle needs slits_per_side >= 5, got {slits_per_side}"
        )));
    }
    if samples < 1000 {
        return Err(Error::Config(format!(
            "oracle needs samples >= 1000, got {samples}"
        )));
    }
    gratings.validate()?;

    let lambda = de_broglie_wavelength(molecule.mass_amu, velocity)?;
    let phi0 = phase_grating_modulation(molecule, gratings, velocity)?;
    let d = gratings.period_d;
    let lam_l = lambda * gratings.spacing_l;
    let fresnel_scale = lam_l.sqrt();

    // Diffraction fan: grating orders carry weight J_n(2φ₀), negligible a few
    // orders past 2φ₀. A fan of zero orders (laser off) is free propagation.
    let two_phi0 = T::of(2.0) * phi0;
    let n_ord: u32 = if two_phi0 < T::of(0.05) {
        0
    } else {
        two_phi0.ceil().to_u32().unwrap_or(0) + 4
    };
    let n_ord_t = T::from_u32(n_ord).unwrap();

    // Half-width of the G2 integration window: order fan plus Fresnel zones,
    // the outer zones reserved for the apodization ramp.
    let half_w = n_ord_t * lam_l / (T::of(2.0) * d) + T::of(8.0) * fresnel_scale;
    let apod_start = half_w - T::of(4.0) * fresnel_scale;

    // Nyquist: resolve the chirp at the window edge plus the highest grating
    // order, and keep the screen grid fine enough that no density harmonic
    // aliases onto the ν = 1/d projection.
    let f_max = T::of(2.0) * half_w / lam_l + n_ord_t / d;
    let du_req = (T::one() / (T::of(4.0) * f_max)).min(d / T::of(2.0 * n_ord as f64 + 4.0));
    let du = T::of(2.0) * half_w / T::from_u32(samples).unwrap();
    if du > du_req {
        let needed = (T::of(2.0) * half_w / du_req).ceil().to_u64().unwrap_or(u64::MAX);
        return Err(Error::Config(format!(
            "oracle sampling too coarse for this geometry: {samples} samples give a step of \
             {du:e} m across the {:e} m diffraction window, but resolving the Fresnel chirp and \
             grating order {n_ord} at wavelength {lambda:e} m needs a step of at most {du_req:e} \
             m; increase samples to at least {needed}",
            T::of(2.0) * half_w,
        )));
    }
    let n2 = samples as usize;
    let n2_half = (n2 / 2) as i64;

    // Screen grid: spacing an even multiple of du (so the stationary point
    // (x₁+x₃)/2 stays on the shared grid), near d/32.
    let k0 = (d / (T::of(64.0) * du)).floor().to_i64().unwrap_or(1).max(1);
    let dx3 = T::of(2.0) * du * T::from_i64(k0).unwrap();
    // Hann projection window over ±32 periods of the screen.
    let n3_half = (T::of(32.0) * d / dx3).floor().to_i64().unwrap_or(0).max(8);
    let x3_extent = T::from_i64(n3_half + 1).unwrap() * dx3;

    // Sources: a boundary-corrected comb of spacing 2·du across the open
    // window of every slit, slit centers snapped to the shared grid.
    let half_open = gratings.open_fraction_g1 * d / T::of(2.0);
    let two_du = T::of(2.0) * du;
    let comb_reach = (half_open / two_du).ceil().to_i64().unwrap_or(0) + 1;
    let mut sources: Vec<Source<T>> = Vec::new();
    let n_slits = slits_per_side as i64;
    for slit in -n_slits..=n_slits {
        let center = T::from_i64(slit).unwrap() * d;
        let center_idx = (center / two_du).round().to_i64().unwrap();
        for k in -comb_reach..=comb_reach {
            let offset = T::from_i64(k).unwrap() * two_du;
            // Overlap of the cell [offset-du, offset+du] with the open window.
            let lo = (offset - du).max(-half_open);
            let hi = (offset + du).min(half_open);
            if hi > lo {
                sources.push(Source {
                    grid_index: (center_idx + k) * 2,
                    weight: (hi - lo) / two_du,
                });
            }
        }
    }

    // Shared transmission table for G2 over every reachable grid point.
    let max_src_idx = sources.iter().map(|s| s.grid_index.abs()).max().unwrap();
    let reach = (max_src_idx + 2 * k0 * n3_half) / 2 + n2_half + 4;
    let table_offset = reach;
    let table_len = (2 * reach + 1) as usize;
    let t2: Vec<Complex<T>> = (0..table_len)
        .map(|i| {
            let x = T::from_i64(i as i64 - table_offset).unwrap() * du;
            // exp(i·2φ₀·cos²(πx/d)) up to a global phase.
            let phase = phi0 * (T::of(2.0) * T::PI() * x / d).cos();
            Complex::new(phase.cos(), phase.sin())
        })
        .collect();

    // Fresnel chirp with edge apodization, on the same grid.
    let chirp: Vec<Complex<T>> = (0..n2)
        .map(|k| {
            let u = T::from_i64(k as i64 - n2_half).unwrap() * du;
            let phase = T::of(2.0) * T::PI() * u * u / lam_l;
            let taper = if u.abs() <= apod_start {
                T::one()
            } else {
                let t = (u.abs() - apod_start) / (half_w - apod_start);
                ((T::PI() / T::of(2.0)) * t.min(T::one())).cos().powi(2)
            };
            Complex::new(phase.cos() * taper, phase.sin() * taper)
        })
        .collect();

    // Screen-point weights and projection phasors.
    let screen: Vec<(T, Complex<T>)> = (-n3_half..=n3_half)
        .map(|j| {
            let x3 = T::from_i64(j).unwrap() * dx3;
            let hann = ((T::PI() / T::of(2.0)) * x3 / x3_extent).cos().powi(2);
            let proj = T::of(2.0) * T::PI() * x3 / d;
            (hann, Complex::new(proj.cos(), proj.sin()))
        })
        .collect();

    let per_source: Vec<(T, Complex<T>)> = sources
        .par_iter()
        .map(|src| {
            let mut i0 = T::zero();
            let mut i1 = Complex::new(T::zero(), T::zero());
            for (j, &(hann, proj)) in screen.iter().enumerate() {
                let j_rel = j as i64 - n3_half;
                // Stationary-point index (x₁ + x₃)/2 on the shared grid.
                let mid = (src.grid_index + 2 * k0 * j_rel) / 2;
                let base = (mid - n2_half + table_offset) as usize;
                let mut field = Complex::new(T::zero(), T::zero());
                for (t, c) in t2[base..base + n2].iter().zip(chirp.iter()) {
                    field += *t * *c;
                }
                let density = src.weight * hann * field.norm_sqr();
                i0 += density;
                i1 += proj * density;
            }
            (i0, i1)
        })
        .collect();

    let (i0_a, i1_a) = pairwise_sum(&per_source);

    // Free-propagation normalization: with t₂ ≡ 1 the screen density is flat
    // and identical for every source, so one field evaluation suffices.
    let mut free = Complex::new(T::zero(), T::zero());
    for c in &chirp {
        free += *c;
    }
    let weight_total: T = sources.iter().map(|s| s.weight).sum();
    let hann_total: T = screen.iter().map(|&(h, _)| h).sum();
    let i0_free = free.norm_sqr() * weight_total * hann_total;
    if i0_free <= T::zero() {
        return Err(Error::Numerical("oracle normalization vanished".into()));
    }

    let f1 = gratings.open_fraction_g1;
    let c0_g3 = binary_grating_fourier_coefficient(gratings.open_fraction_g3, 0)?;
    let c1_g3 = binary_grating_fourier_coefficient(gratings.open_fraction_g3, 1)?;

    let offset = f1 * c0_g3 * i0_a / i0_free;
    let amplitude = T::of(2.0) * c1_g3 * i1_a.norm() * f1 / i0_free;
    Ok(FringeCoefficients::from_offset_amplitude(offset, amplitude))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fringe::analytic_fringe;
    use crate::physics::MoleculeSpec;

    fn molecule() -> MoleculeSpec {
        MoleculeSpec {
            name: "oracle-test".into(),
            mass_amu: 1592.0,
            alpha_stat: 70.0,
            alpha_stat_uncertainty: 0.0,
            alpha_opt: 70.0,
            chi_true: 126.0,
            dipole_model: vec![],
            internal_temperature_k: 458.0,
        }
    }

    fn gratings(power: f64) -> GratingSet {
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

    /// Velocity putting L/L_T exactly at 3.5, where sin(π·L/L_T) = -1.
    fn velocity_at_half_talbot() -> f64 {
        let g = gratings(1.0);
        let lambda = 3.5 * g.period_d * g.period_d / g.spacing_l;
        crate::constants::PLANCK_H
            / (1592.0 * crate::constants::ATOMIC_MASS_UNIT * lambda)
    }

    #[test]
    fn rejects_bad_arguments() {
        let m = molecule();
        let g = gratings(1.0);
        assert!(numerical_oracle_fringe(&m, &g, 91.0, 3, 4096).is_err());
        assert!(numerical_oracle_fringe(&m, &g, 91.0, 5, 100).is_err());
    }

    #[test]
    fn insufficient_sampling_names_the_minimum() {
        let m = molecule();
        let g = gratings(6.0);
        let err = numerical_oracle_fringe(&m, &g, 91.0, 5, 1000).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("increase samples"), "unexpected message: {msg}");
    }

    #[test]
    fn open_phase_grating_washes_out() {
        // Laser off: G2 is a fully open plane, incoherent sources leave a
        // flat screen density and the projected visibility collapses.
        let m = molecule();
        let mut g = gratings(1.0);
        g.laser_power = 1e-30;
        let fc = numerical_oracle_fringe(&m, &g, 91.0, 50, 1536).unwrap();
        assert!(
            fc.visibility < 0.05,
            "moire washout failed: V = {}",
            fc.visibility
        );
    }

    #[test]
    fn matches_analytic_model_at_moderate_phase() {
        // One mid-sweep point; the full five-point sweep runs in the
        // acceptance suite.
        let m = molecule();
        let v = velocity_at_half_talbot();
        // phi0 = 1.0 → |ξ| = 2.0.
        let mut g = gratings(1.0);
        let unit = crate::fringe::phase_grating_modulation(&m, &g, v).unwrap();
        g.laser_power = 1.0 / unit;
        let reference = analytic_fringe(&m, &g, v).unwrap();
        let fc = numerical_oracle_fringe(&m, &g, v, 5, 6144).unwrap();
        let rel = (fc.visibility - reference.visibility).abs() / reference.visibility;
        assert!(
            rel < 1e-2,
            "oracle V = {}, analytic V = {}, rel = {rel}",
            fc.visibility,
            reference.visibility
        );
    }

    #[test]
    fn deterministic_across_runs() {
        let m = molecule();
        let v = velocity_at_half_talbot();
        let g = gratings(2.0);
        let a = numerical_oracle_fringe(&m, &g, v, 5, 6144).unwrap();
        let b = numerical_oracle_fringe(&m, &g, v, 5, 6144).unwrap();
        assert_eq!(a.offset, b.offset);
        assert_eq!(a.amplitude, b.amplitude);
    }

    #[test]
    fn parallel_sum_bit_identical_to_single_thread() {
        // The pairwise reduction order is fixed by source index, so a
        // single-thread pool must reproduce the default pool bit for bit.
        let m = molecule();
        let mut g = gratings(1.0);
        g.laser_power = 1e-30; // free propagation keeps this case cheap
        let parallel = numerical_oracle_fringe(&m, &g, 91.0, 6, 1536).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| numerical_oracle_fringe(&m, &g, 91.0, 6, 1536).unwrap());
        assert_eq!(parallel.offset, serial.offset);
        assert_eq!(parallel.amplitude, serial.amplitude);
    }
}
