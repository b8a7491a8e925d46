//! Error taxonomy shared by the whole crate.
//!
//! The CLI maps these onto its stable exit codes: validation failures → 2,
//! I/O failures → 3, numerical failures → 4.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a physical or mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or input file failed validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure failed to converge or lost accuracy.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The sinusoid fit could not be performed on the given scan.
    #[error("fit error: {0}")]
    Fit(String),

    /// The susceptibility root-find failed.
    #[error("extraction error: {0}")]
    Extraction(String),

    /// Geometry-factor calibration failed.
    #[error("calibration error: {0}")]
    Calibration(String),

    /// Weighted-mean aggregation had no usable entries.
    #[error("aggregation error: {0}")]
    Aggregation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Exit code contract: 0 success, 2 validation, 3 I/O, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Domain(_) | Error::Config(_) | Error::Format(_) => 2,
            Error::Io(_) => 3,
            Error::Numerical(_)
            | Error::Fit(_)
            | Error::Extraction(_)
            | Error::Calibration(_)
            | Error::Aggregation(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
