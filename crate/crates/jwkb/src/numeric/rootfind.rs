//! Sign-scan bracketing and bisection.

use crate::error::Result;
use crate::num::Real;

/// Bisection on a bracketed sign change. `fa` and `fb` are the (already
/// evaluated) endpoint values with `fa * fb < 0`.
pub fn bisect<T: Real, F>(f: &mut F, mut a: T, mut b: T, mut fa: T, tol: T) -> Result<T>
where
    F: FnMut(T) -> Result<T>,
{
    loop {
        let mid = T::lit(0.5) * (a + b);
        if (b - a).abs() <= tol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fa > T::zero()) != (fm > T::zero()) {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
}

/// All roots of `f` on `[a, b]` found by a uniform pre-scan with
/// `n_intervals` cells followed by bisection to absolute tolerance `tol`.
/// Roots closer than the scan resolution may be merged; even-order
/// tangencies are not detected.
pub fn scan_roots<T: Real, F>(f: &mut F, a: T, b: T, n_intervals: usize, tol: T) -> Result<Vec<T>>
where
    F: FnMut(T) -> Result<T>,
{
    let mut roots = Vec::new();
    if !(a < b) {
        return Ok(roots);
    }
    let n = T::from_usize(n_intervals).unwrap();
    let mut x_prev = a;
    let mut f_prev = f(a)?;
    if f_prev == T::zero() {
        roots.push(a);
    }
    for idx in 1..=n_intervals {
        let x = if idx == n_intervals {
            b
        } else {
            a + (b - a) * T::from_usize(idx).unwrap() / n
        };
        let fx = f(x)?;
        if fx == T::zero() {
            roots.push(x);
        } else if f_prev != T::zero() && (f_prev > T::zero()) != (fx > T::zero()) {
            roots.push(bisect(f, x_prev, x, f_prev, tol)?);
        }
        x_prev = x;
        f_prev = fx;
    }
    roots.sort_by(|p, q| p.partial_cmp(q).unwrap());
    roots.dedup_by(|p, q| (*p - *q).abs() <= tol + tol);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_both_roots_of_a_parabola() {
        let mut f = |x: f64| Ok(x * x - 2.0);
        let roots = scan_roots(&mut f, -3.0, 3.0, 512, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 2.0f64.sqrt()).abs() < 1e-10);
        assert!((roots[1] - 2.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn empty_when_no_sign_change() {
        let mut f = |x: f64| Ok(x * x + 1.0);
        assert!(scan_roots(&mut f, -5.0, 5.0, 128, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn root_exactly_on_scan_node() {
        let mut f = |x: f64| Ok(x);
        let roots = scan_roots(&mut f, -2.0, 2.0, 4, 1e-12).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0], 0.0);
    }
}
