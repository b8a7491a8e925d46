//! File formats: configuration, scan CSVs, manifest, estimates, reports.

pub mod calibration;
pub mod config;
pub mod estimate;
pub mod manifest;
pub mod report;
pub mod scan_csv;
pub mod schema;

pub use calibration::CalibrationFile;
pub use config::ExperimentConfig;
pub use estimate::{EstimateFile, PerVoltageRow, SensitivityRow};
pub use manifest::{fnv1a64_hex, ScanManifest, ScanPairEntry};
pub use report::{build_report, ComparisonReport};
pub use scan_csv::{parse_scan_csv, parse_vdist_csv, write_scan_csv};
