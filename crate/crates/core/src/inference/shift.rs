//! Differential fringe shifts and phase unwrapping across the voltage
//! staircase.
//!
//! Fitted fringe positions are only known modulo the period d. Each voltage
//! is measured against the reference voltage; the branch of the difference is
//! chosen by the quadratic law Δx₃ ∝ U², seeded from the lowest voltages
//! where the shift is safely below d/2. Cases where the wrong branch is also
//! statistically compatible are surfaced as ambiguous, never silently
//! resolved.

use crate::error::{Error, Result};
use crate::inference::fit::FringeFit;

/// An unwrapped differential shift with its statistical uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftMeasurement {
    /// Δx₃(U) − Δx₃(U_ref), meters, on the selected branch.
    pub delta: f64,
    pub sigma: f64,
    /// Both candidate branches when the choice was ambiguous at 1σ.
    pub ambiguous: Option<(f64, f64)>,
}

/// Wrap into the principal interval (−d/2, d/2].
fn wrap(x: f64, period: f64) -> f64 {
    let mut r = x - period * (x / period).round();
    if r <= -period / 2.0 {
        r += period;
    }
    r
}

/// Difference of two fitted fringe positions, unwrapped onto the branch
/// nearest `predicted` (principal branch when no prediction is available).
pub fn differential_shift(
    fit_u: &FringeFit<f64>,
    fit_ref: &FringeFit<f64>,
    predicted: Option<f64>,
) -> Result<ShiftMeasurement> {
    if (fit_u.period - fit_ref.period).abs() > 1e-9 * fit_u.period {
        return Err(Error::Fit(format!(
            "differential shift needs equal periods, got {} and {}",
            fit_u.period, fit_ref.period
        )));
    }
    let d = fit_u.period;
    let sigma = (fit_u.sigma_shift().powi(2) + fit_ref.sigma_shift().powi(2)).sqrt();
    let raw = wrap(fit_u.shift - fit_ref.shift, d);

    let delta = match predicted {
        None => raw,
        Some(p) => raw + d * ((p - raw) / d).round(),
    };
    let target = predicted.unwrap_or(delta);
    // Nearest competing branch; flag when it is also within 1σ of the
    // prediction target.
    let competitor = if target - delta >= 0.0 {
        delta + d
    } else {
        delta - d
    };
    let ambiguous = if (competitor - target).abs() < sigma {
        Some((delta, competitor))
    } else {
        None
    };
    Ok(ShiftMeasurement {
        delta,
        sigma,
        ambiguous,
    })
}

/// One voltage rung of the staircase: the signal fit and its paired
/// reference-voltage fit.
#[derive(Debug, Clone)]
pub struct StaircaseRung {
    pub voltage: f64,
    pub fit: FringeFit<f64>,
    pub reference_fit: FringeFit<f64>,
}

/// An unwrapped rung, with the visibility ratio against its reference scan
/// (consumed by the exclusion rule downstream).
#[derive(Debug, Clone, Copy)]
pub struct UnwrappedShift {
    pub voltage: f64,
    pub measurement: ShiftMeasurement,
    pub visibility_ratio: f64,
}

/// Unwrap a full voltage staircase against the common reference voltage.
///
/// Rungs are processed in ascending voltage order; after each rung the
/// quadratic-law coefficient c in Δ = c·(U² − U_ref²) is refitted by weighted
/// least squares over the rungs unwrapped so far and predicts the branch of
/// the next one. Results come back sorted by voltage.
pub fn unwrap_staircase(rungs: &[StaircaseRung], ref_voltage: f64) -> Result<Vec<UnwrappedShift>> {
    if rungs.is_empty() {
        return Err(Error::Fit("staircase has no rungs".into()));
    }
    let mut order: Vec<usize> = (0..rungs.len()).collect();
    order.sort_by(|&a, &b| rungs[a].voltage.total_cmp(&rungs[b].voltage));

    let mut out = Vec::with_capacity(rungs.len());
    let mut num = 0.0; // Σ w·x·δ
    let mut den = 0.0; // Σ w·x²
    for &i in &order {
        let rung = &rungs[i];
        let x = rung.voltage.powi(2) - ref_voltage.powi(2);
        let predicted = if den > 0.0 { Some(num / den * x) } else { None };
        let m = differential_shift(&rung.fit, &rung.reference_fit, predicted)?;
        let w = 1.0 / m.sigma.powi(2).max(1e-300);
        num += w * x * m.delta;
        den += w * x * x;
        let visibility_ratio = if rung.reference_fit.visibility > 0.0 {
            rung.fit.visibility / rung.reference_fit.visibility
        } else {
            0.0
        };
        out.push(UnwrappedShift {
            voltage: rung.voltage,
            measurement: m,
            visibility_ratio,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::fit::fit_sinusoid_points;

    const D: f64 = 266e-9;

    fn fit_for_shift(shift: f64, amplitude: f64) -> FringeFit<f64> {
        let grid: Vec<f64> = (0..41).map(|i| i as f64 * 26e-9).collect();
        let y: Vec<f64> = grid
            .iter()
            .map(|&x| 1000.0 + amplitude * (2.0 * std::f64::consts::PI * (x - shift) / D).sin())
            .collect();
        let var = vec![1000.0; grid.len()];
        fit_sinusoid_points(&grid, &y, &var, D).unwrap()
    }

    #[test]
    fn identical_fits_give_zero_with_positive_sigma() {
        let f = fit_for_shift(40e-9, 300.0);
        let m = differential_shift(&f, &f, None).unwrap();
        assert!(m.delta.abs() < 1e-15);
        assert!(m.sigma > 0.0);
        assert!(m.ambiguous.is_none());
    }

    #[test]
    fn unwrapped_difference_without_wrap() {
        let fu = fit_for_shift(120e-9, 300.0);
        let fr = fit_for_shift(20e-9, 300.0);
        let m = differential_shift(&fu, &fr, None).unwrap();
        assert!((m.delta - 100e-9).abs() < 1e-12);
    }

    #[test]
    fn exchanging_roles_negates_delta() {
        let fu = fit_for_shift(95e-9, 300.0);
        let fr = fit_for_shift(-30e-9, 300.0);
        let fwd = differential_shift(&fu, &fr, None).unwrap();
        let bwd = differential_shift(&fr, &fu, None).unwrap();
        assert!((fwd.delta + bwd.delta).abs() < 1e-15);
    }

    #[test]
    fn prediction_selects_the_outer_branch() {
        // True differential 1.3·d wraps to 0.3·d; a quadratic-law prediction
        // near 1.3·d must restore it.
        let truth = 1.3 * D;
        let fu = fit_for_shift(wrap(truth, D), 300.0);
        let fr = fit_for_shift(0.0, 300.0);
        let naive = differential_shift(&fu, &fr, None).unwrap();
        assert!((naive.delta - 0.3 * D).abs() < 1e-12);
        let informed = differential_shift(&fu, &fr, Some(1.25 * D)).unwrap();
        assert!((informed.delta - truth).abs() < 1e-12);
        assert!(informed.ambiguous.is_none());
    }

    #[test]
    fn huge_uncertainty_flags_ambiguity() {
        let mut fu = fit_for_shift(60e-9, 300.0);
        let fr = fit_for_shift(0.0, 300.0);
        // Inflate the shift variance beyond the branch separation.
        fu.covariance[2][2] = (1.5 * D).powi(2);
        let m = differential_shift(&fu, &fr, Some(60e-9)).unwrap();
        let (a, b) = m.ambiguous.expect("should be ambiguous");
        assert!((a - b).abs() > 0.9 * D);
    }

    #[test]
    fn staircase_restores_wrapped_high_voltage_shifts() {
        // Synthetic staircase 1..10 kV with shift(10 kV) = 2 periods: the top
        // rungs wrap, the quadratic prior restores them.
        let ref_v = 1000.0_f64;
        let c = 2.0 * D / (10_000.0f64.powi(2) - ref_v.powi(2));
        let rungs: Vec<StaircaseRung> = (2..=10)
            .map(|kv| {
                let u = kv as f64 * 1000.0;
                let truth = c * (u * u - ref_v * ref_v);
                StaircaseRung {
                    voltage: u,
                    fit: fit_for_shift(wrap(truth, D), 300.0),
                    reference_fit: fit_for_shift(0.0, 300.0),
                }
            })
            .collect();
        let unwrapped = unwrap_staircase(&rungs, ref_v).unwrap();
        for u in &unwrapped {
            let truth = c * (u.voltage * u.voltage - ref_v * ref_v);
            assert!(
                (u.measurement.delta - truth).abs() < 1e-11,
                "U = {}: got {}, want {truth}",
                u.voltage,
                u.measurement.delta
            );
            assert!(u.measurement.ambiguous.is_none());
        }
        // The largest shift really is beyond one period.
        assert!(unwrapped.last().unwrap().measurement.delta > 1.5 * D);
    }
}
