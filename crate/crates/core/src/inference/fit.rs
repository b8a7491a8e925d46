//! Least-squares sinusoid fit with the period fixed to the grating constant.
//!
//! With the period known the model O + a·sin(2πx/d) + b·cos(2πx/d) is linear
//! in (O, a, b); amplitude and fringe position follow from (a, b) and the
//! covariance is propagated through that change of variables.

use crate::error::{Error, Result};
use crate::math::linalg::{invert3, solve3, Mat3};
use crate::real::Real;

/// Fitted first-harmonic parameters and their covariance over
/// (offset, amplitude, shift).
#[derive(Debug, Clone, PartialEq)]
pub struct FringeFit<T: Real = f64> {
    pub offset: T,
    /// Non-negative by construction; the sign lives in the phase.
    pub amplitude: T,
    /// Fringe position Δx₃ in (−d/2, d/2] (m).
    pub shift: T,
    pub visibility: T,
    pub covariance: Mat3<T>,
    pub chi_squared_reduced: T,
    /// Set when A/σ_A < 1; informational, not an error.
    pub low_contrast: bool,
    pub period: T,
}

impl<T: Real> FringeFit<T> {
    pub fn sigma_offset(&self) -> T {
        self.covariance[0][0].max(T::zero()).sqrt()
    }
    pub fn sigma_amplitude(&self) -> T {
        self.covariance[1][1].max(T::zero()).sqrt()
    }
    pub fn sigma_shift(&self) -> T {
        self.covariance[2][2].max(T::zero()).sqrt()
    }
}

/// Fit `values` over `positions` with per-point variances, period fixed.
pub fn fit_sinusoid_points<T: Real>(
    positions: &[T],
    values: &[T],
    variances: &[T],
    period: T,
) -> Result<FringeFit<T>> {
    let n = positions.len();
    if n < 6 {
        return Err(Error::Fit(format!("need at least 6 points, got {n}")));
    }
    if values.len() != n || variances.len() != n {
        return Err(Error::Fit(format!(
            "length mismatch: {n} positions, {} values, {} variances",
            values.len(),
            variances.len()
        )));
    }
    if period <= T::zero() {
        return Err(Error::Fit(format!("period must be > 0, got {period}")));
    }
    let span = positions
        .iter()
        .cloned()
        .fold(T::neg_infinity(), T::max)
        - positions.iter().cloned().fold(T::infinity(), T::min);
    if span < period * T::of(1.0 - 1e-9) {
        return Err(Error::Fit(format!(
            "scan spans {span} m, less than one period {period} m"
        )));
    }

    let tau = T::of(2.0) * T::PI() / period;
    let mut ata = [[T::zero(); 3]; 3];
    let mut atb = [T::zero(); 3];
    for i in 0..n {
        let var = variances[i];
        if var <= T::zero() || !var.is_finite() {
            return Err(Error::Fit(format!(
                "per-point variance must be > 0, got {var}"
            )));
        }
        let w = T::one() / var;
        let theta = tau * positions[i];
        let row = [T::one(), theta.sin(), theta.cos()];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += w * row[r] * row[c];
            }
            atb[r] += w * row[r] * values[i];
        }
    }
    let beta = solve3(&ata, &atb)
        .ok_or_else(|| Error::Fit("rank-deficient design (degenerate scan grid)".into()))?;
    let cov_lin = invert3(&ata)
        .ok_or_else(|| Error::Fit("rank-deficient design (degenerate scan grid)".into()))?;

    let (offset, a, b) = (beta[0], beta[1], beta[2]);
    let amplitude = (a * a + b * b).sqrt();

    // S = O + A·sin(2π(x−Δ)/d) expands to a = A·cos(2πΔ/d), b = −A·sin(2πΔ/d).
    let mut shift = if amplitude > T::zero() {
        (-b).atan2(a) * period / (T::of(2.0) * T::PI())
    } else {
        T::zero()
    };
    let half = period / T::of(2.0);
    if shift <= -half {
        shift += period;
    }

    // Jacobian of (O, A, Δ) with respect to (O, a, b).
    let jac: Mat3<T> = if amplitude > T::zero() {
        let a2 = amplitude * amplitude;
        let k = period / (T::of(2.0) * T::PI());
        [
            [T::one(), T::zero(), T::zero()],
            [T::zero(), a / amplitude, b / amplitude],
            [T::zero(), k * b / a2, -k * a / a2],
        ]
    } else {
        [
            [T::one(), T::zero(), T::zero()],
            [T::zero(), T::one(), T::zero()],
            [T::zero(), T::zero(), T::one()],
        ]
    };
    let mut covariance = [[T::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let mut s = T::zero();
            for p in 0..3 {
                for q in 0..3 {
                    s += jac[r][p] * cov_lin[p][q] * jac[c][q];
                }
            }
            covariance[r][c] = s;
        }
    }

    let mut chi2 = T::zero();
    for i in 0..n {
        let theta = tau * positions[i];
        let model = offset + a * theta.sin() + b * theta.cos();
        let r = values[i] - model;
        chi2 += r * r / variances[i];
    }
    let chi_squared_reduced = chi2 / T::from_usize(n - 3).unwrap();

    let sigma_a = covariance[1][1].max(T::zero()).sqrt();
    let low_contrast = amplitude < sigma_a;
    let visibility = if offset > T::zero() {
        amplitude / offset
    } else {
        T::zero()
    };

    Ok(FringeFit {
        offset,
        amplitude,
        shift,
        visibility,
        covariance,
        chi_squared_reduced,
        low_contrast,
        period,
    })
}

/// Fit a recorded scan; per-point Poisson variance max(counts, 1).
pub fn fit_sinusoid(scan: &crate::beamline::FringeScan, period: f64) -> Result<FringeFit<f64>> {
    scan.validate()?;
    let values: Vec<f64> = scan.counts.iter().map(|&c| c as f64).collect();
    let variances: Vec<f64> = scan.counts.iter().map(|&c| (c.max(1)) as f64).collect();
    fit_sinusoid_points(&scan.positions, &values, &variances, period)
}
