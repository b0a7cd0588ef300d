//! Least-squares line fit, used for the divergence-exponent and
//! convergence-order estimates.

use crate::num::Real;

/// Returns `(slope, intercept)` of the least-squares line through
/// `(xs[i], ys[i])`. Requires at least two points.
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> (T, T) {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = T::from_usize(xs.len()).unwrap();
    let sx = xs.iter().fold(T::zero(), |a, &v| a + v);
    let sy = ys.iter().fold(T::zero(), |a, &v| a + v);
    let sxx = xs.iter().fold(T::zero(), |a, &v| a + v * v);
    let sxy = xs
        .iter()
        .zip(ys)
        .fold(T::zero(), |a, (&x, &y)| a + x * y);
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}
