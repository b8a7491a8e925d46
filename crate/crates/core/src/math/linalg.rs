//! Tiny dense solver for the 3x3 normal equations of the sinusoid fit.

use crate::real::Real;

pub type Mat3<T> = [[T; 3]; 3];

/// Solve A·x = b by Gaussian elimination with partial pivoting.
/// Returns None when A is numerically singular.
#[allow(clippy::needless_range_loop)]
pub fn solve3<T: Real>(a: &Mat3<T>, b: &[T; 3]) -> Option<[T; 3]> {
    let mut m = *a;
    let mut rhs = *b;
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if m[pivot][col].abs() < T::epsilon() * T::of(64.0) {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [T::zero(); 3];
    for col in (0..3).rev() {
        let mut s = rhs[col];
        for k in col + 1..3 {
            s -= m[col][k] * x[k];
        }
        x[col] = s / m[col][col];
    }
    Some(x)
}

/// Inverse via three solves against unit vectors.
#[allow(clippy::needless_range_loop)]
pub fn invert3<T: Real>(a: &Mat3<T>) -> Option<Mat3<T>> {
    let mut inv = [[T::zero(); 3]; 3];
    for j in 0..3 {
        let mut e = [T::zero(); 3];
        e[j] = T::one();
        let col = solve3(a, &e)?;
        for i in 0..3 {
            inv[i][j] = col[i];
        }
    }
    Some(inv)
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn solves_known_system() {
        let a: Mat3<f64> = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let x_true = [1.0, -2.0, 0.5];
        let b = [
            a[0][0] * x_true[0] + a[0][1] * x_true[1] + a[0][2] * x_true[2],
            a[1][0] * x_true[0] + a[1][1] * x_true[1] + a[1][2] * x_true[2],
            a[2][0] * x_true[0] + a[2][1] * x_true[1] + a[2][2] * x_true[2],
        ];
        let x = solve3(&a, &b).unwrap();
        for i in 0..3 {
            assert!((x[i] - x_true[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a: Mat3<f64> = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = invert3(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += inv[i][k] * a[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let a: Mat3<f64> = [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]];
        assert!(solve3(&a, &[1.0, 2.0, 3.0]).is_none());
    }
}
