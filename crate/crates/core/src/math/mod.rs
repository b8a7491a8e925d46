//! Shared numerics: special functions, quadrature, small linear algebra.

pub mod bessel;
pub mod gauss;
pub mod linalg;
