//! Fourth-order finite-difference stencils on uniform grids.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::Real;

fn stencil<T: Real>(values: &[Complex<T>], idxs: &[usize], coeffs: &[f64], scale: T) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (&i, &c) in idxs.iter().zip(coeffs) {
        acc = acc + values[i] * T::lit(c);
    }
    acc * scale
}

/// First derivative, 4th order. Centered five-point stencil in the
/// interior, one-sided five-point stencils at the first and last two points.
pub fn derivative_uniform<T: Real>(values: &[Complex<T>], h: T) -> Result<Vec<Complex<T>>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::GridTooCoarse { needed: 5, got: n });
    }
    let inv12h = (T::lit(12.0) * h).recip();
    let mut out = Vec::with_capacity(n);

    out.push(stencil(values, &[0, 1, 2, 3, 4], &[-25.0, 48.0, -36.0, 16.0, -3.0], inv12h));
    out.push(stencil(values, &[0, 1, 2, 3, 4], &[-3.0, -10.0, 18.0, -6.0, 1.0], inv12h));
    for i in 2..n - 2 {
        out.push(stencil(
            values,
            &[i - 2, i - 1, i + 1, i + 2],
            &[1.0, -8.0, 8.0, -1.0],
            inv12h,
        ));
    }
    out.push(stencil(
        values,
        &[n - 5, n - 4, n - 3, n - 2, n - 1],
        &[-1.0, 6.0, -18.0, 10.0, 3.0],
        inv12h,
    ));
    out.push(stencil(
        values,
        &[n - 5, n - 4, n - 3, n - 2, n - 1],
        &[3.0, -16.0, 36.0, -48.0, 25.0],
        inv12h,
    ));
    Ok(out)
}

/// Second derivative, 4th order. Centered five-point stencil in the
/// interior, one-sided six-point stencils at the edges.
pub fn second_derivative_uniform<T: Real>(values: &[Complex<T>], h: T) -> Result<Vec<Complex<T>>> {
    let n = values.len();
    if n < 6 {
        return Err(Error::GridTooCoarse { needed: 6, got: n });
    }
    let inv12h2 = (T::lit(12.0) * h * h).recip();
    let mut out = Vec::with_capacity(n);

    out.push(stencil(
        values,
        &[0, 1, 2, 3, 4, 5],
        &[45.0, -154.0, 214.0, -156.0, 61.0, -10.0],
        inv12h2,
    ));
    out.push(stencil(
        values,
        &[0, 1, 2, 3, 4, 5],
        &[10.0, -15.0, -4.0, 14.0, -6.0, 1.0],
        inv12h2,
    ));
    for i in 2..n - 2 {
        out.push(stencil(
            values,
            &[i - 2, i - 1, i, i + 1, i + 2],
            &[-1.0, 16.0, -30.0, 16.0, -1.0],
            inv12h2,
        ));
    }
    out.push(stencil(
        values,
        &[n - 6, n - 5, n - 4, n - 3, n - 2, n - 1],
        &[1.0, -6.0, 14.0, -4.0, -15.0, 10.0],
        inv12h2,
    ));
    out.push(stencil(
        values,
        &[n - 6, n - 5, n - 4, n - 3, n - 2, n - 1],
        &[-10.0, 61.0, -156.0, 214.0, -154.0, 45.0],
        inv12h2,
    ));
    Ok(out)
}

/// One-sided first derivative at the start of a uniform grid, 6th order
/// (seven points).
pub fn derivative_at_start<T: Real>(values: &[Complex<T>], h: T) -> Result<Complex<T>> {
    if values.len() < 7 {
        return Err(Error::GridTooCoarse {
            needed: 7,
            got: values.len(),
        });
    }
    let coeffs = [
        -49.0 / 20.0,
        6.0,
        -15.0 / 2.0,
        20.0 / 3.0,
        -15.0 / 4.0,
        6.0 / 5.0,
        -1.0 / 6.0,
    ];
    Ok(stencil(values, &[0, 1, 2, 3, 4, 5, 6], &coeffs, h.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::linspace;
    use crate::num::cc;

    fn sample(n: usize) -> (Vec<Complex<f64>>, Vec<f64>, f64) {
        let grid = linspace(0.0f64, 2.0, n);
        let vals: Vec<Complex<f64>> = grid.iter().map(|&x| cc((1.7 * x).sin())).collect();
        let h = grid[1] - grid[0];
        (vals, grid, h)
    }

    #[test]
    fn first_derivative_fourth_order() {
        let (vals, grid, h) = sample(201);
        let d = derivative_uniform(&vals, h).unwrap();
        for (i, &x) in grid.iter().enumerate() {
            let exact = 1.7 * (1.7 * x).cos();
            // one-sided stencils at the edges carry a larger error constant
            let tol = if i < 2 || i >= grid.len() - 2 { 1e-7 } else { 1e-8 };
            assert!((d[i].re - exact).abs() < tol, "i={i}");
        }
    }

    #[test]
    fn second_derivative_fourth_order() {
        let (vals, grid, h) = sample(201);
        let d = second_derivative_uniform(&vals, h).unwrap();
        for (i, &x) in grid.iter().enumerate() {
            let exact = -1.7 * 1.7 * (1.7 * x).sin();
            assert!((d[i].re - exact).abs() < 2e-7, "i={i}, err={}", (d[i].re - exact).abs());
        }
    }

    #[test]
    fn interior_error_contracts_at_fourth_order() {
        let errs: Vec<f64> = [101usize, 201]
            .iter()
            .map(|&n| {
                let (vals, grid, h) = sample(n);
                let d = second_derivative_uniform(&vals, h).unwrap();
                grid.iter()
                    .enumerate()
                    .skip(2)
                    .take(n - 4)
                    .map(|(i, &x)| (d[i].re + 1.7 * 1.7 * (1.7 * x).sin()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(ratio > 12.0, "ratio={ratio}");
    }

    #[test]
    fn start_derivative_sixth_order() {
        let (vals, _, h) = sample(401);
        let d = derivative_at_start(&vals, h).unwrap();
        assert!((d.re - 1.7).abs() < 1e-10);
    }
}
