//! Gauss-Legendre quadrature nodes and weights.

use crate::real::Real;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    assert!(n >= 1);
    let mut rule = vec![(T::zero(), T::zero()); n];
    let nf = T::from_usize(n).unwrap();
    let tol = T::epsilon() * T::of(8.0);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess for the i-th root.
        let mut z = (T::PI() * (T::from_usize(i).unwrap() + T::of(0.75))
            / (nf + T::of(0.5)))
        .cos();
        let mut pp = T::zero();
        for _ in 0..100 {
            // Legendre recurrence up to degree n.
            let mut p1 = T::one();
            let mut p2 = T::zero();
            for j in 0..n {
                let jf = T::from_usize(j).unwrap();
                let p3 = p2;
                p2 = p1;
                p1 = ((T::of(2.0) * jf + T::one()) * z * p2 - jf * p3) / (jf + T::one());
            }
            pp = nf * (z * p1 - p2) / (z * z - T::one());
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= tol {
                break;
            }
        }
        let w = T::of(2.0) / ((T::one() - z * z) * pp * pp);
        rule[i] = (-z, w);
        rule[n - 1 - i] = (z, w);
    }
    rule
}

/// Integrate `f` over [a, b] with the given rule.
pub fn integrate<T: Real, F: Fn(T) -> T>(rule: &[(T, T)], a: T, b: T, f: F) -> T {
    let half = (b - a) / T::of(2.0);
    let mid = (a + b) / T::of(2.0);
    rule.iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<T>()
        * half
}
