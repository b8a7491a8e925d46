//! Forward simulation and inverse inference for a three-grating matter-wave
//! interferometer with an optical phase grating and an electrostatic
//! deflector.
//!
//! The forward path synthesizes voltage-dependent sinusoidal fringe scans —
//! near-field diffraction at the standing-wave grating, Stark deflection
//! proportional to the total electric susceptibility χ, velocity averaging
//! and Poisson counting. The inverse path fits the scans, unwraps the
//! differential fringe shifts across the voltage staircase, extracts χ per
//! voltage with the measured velocity distribution folded in, and aggregates
//! an inverse-variance weighted mean. A brute-force Fresnel propagation
//! oracle validates the analytic fringe model.
//!
//! All numerical kernels are generic over the scalar type via [`real::Real`];
//! the crate-root aliases pin the shipped `f64` precision.

pub mod beamline;
pub mod constants;
pub mod error;
pub mod fringe;
pub mod inference;
pub mod io;
pub mod math;
pub mod physics;
pub mod pipeline;
pub mod real;
pub mod vanvleck;

pub use error::{Error, Result};
pub use real::Real;

/// Concrete `f64` aliases for the generic core types.
pub type PhysicalConstants = constants::PhysicalConstants<f64>;
pub type MoleculeSpec = physics::MoleculeSpec<f64>;
pub type DipoleContribution = physics::DipoleContribution<f64>;
pub type GratingSet = fringe::GratingSet<f64>;
pub type FringeCoefficients = fringe::FringeCoefficients<f64>;
pub type VelocityDistribution = beamline::VelocityDistribution<f64>;
pub type DeflectorConfig = beamline::DeflectorConfig<f64>;
pub type EffectiveFringe = beamline::EffectiveFringe<f64>;
pub type FringeFit = inference::FringeFit<f64>;
pub type DipoleEnsemble = vanvleck::DipoleEnsemble<f64>;

pub use beamline::FringeScan;
pub use inference::{ExclusionRule, SusceptibilityEstimate};
pub use pipeline::{Experiment, FitOptions, ScanProtocol};
