//! Inverse pipeline: sinusoid fits, differential shifts, susceptibility
//! extraction, geometry calibration and weighted aggregation.

pub mod aggregate;
pub mod extract;
pub mod fit;
pub mod shift;

pub use aggregate::{aggregate_weighted_mean, ExclusionRule, SusceptibilityEstimate, VoltageEntry};
pub use extract::{
    calibrate_geometry_factor, extract_chi_at_voltage, CalibrationResult, ChiEstimate,
    ExtractionModel, CHI_MAX,
};
pub use fit::{fit_sinusoid, fit_sinusoid_points, FringeFit};
pub use shift::{differential_shift, unwrap_staircase, ShiftMeasurement, StaircaseRung, UnwrappedShift};
