//! Bessel functions of the first kind, small integer order.
//!
//! Evaluated from the integral representation
//! J_n(x) = (1/π) ∫₀^π cos(nθ − x·sinθ) dθ
//! with the trapezoidal rule, which is spectrally accurate here because the
//! integrand extends to a smooth 2π-periodic function. 96 panels hold
//! near machine precision for |x| ≲ 25, far beyond the arguments this crate
//! ever produces (phase modulations of a few radians).

use crate::real::Real;

const PANELS: usize = 96;

/// J_n(x) for n ≥ 0. For negative order use J_{-n} = (-1)^n J_n.
pub fn bessel_j<T: Real>(order: u32, x: T) -> T {
    let n = T::from_u32(order).unwrap();
    let h = T::PI() / T::from_usize(PANELS).unwrap();
    let mut sum = T::zero();
    // Endpoints at half weight: g(0) = 1 scaled, g(π) = cos(nπ).
    sum += (n * T::zero() - x * T::zero()).cos() / T::of(2.0);
    sum += (n * T::PI()).cos() / T::of(2.0);
    for k in 1..PANELS {
        let theta = h * T::from_usize(k).unwrap();
        sum += (n * theta - x * theta.sin()).cos();
    }
    sum * h / T::PI()
}

/// Convenience wrappers for the orders the fringe model uses.
pub fn j0<T: Real>(x: T) -> T {
    bessel_j(0, x)
}

pub fn j1<T: Real>(x: T) -> T {
    bessel_j(1, x)
}

pub fn j2<T: Real>(x: T) -> T {
    bessel_j(2, x)
}
