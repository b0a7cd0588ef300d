//! Natural cubic spline interpolation with first and second derivatives.

use crate::error::{Error, Result};
use crate::num::Real;

/// Natural cubic spline through strictly increasing knots. C² everywhere
/// inside the knot span, so the interpolant supports U, U' and U''.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline<T: Real> {
    xs: Vec<T>,
    ys: Vec<T>,
    // second derivatives at the knots (natural: zero at both ends)
    m: Vec<T>,
}

impl<T: Real> CubicSpline<T> {
    pub fn natural(knots: &[(T, T)]) -> Result<Self> {
        let n = knots.len();
        if n < 3 {
            return Err(Error::invalid(
                "tabulated potential needs at least three knots",
            ));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::invalid(
                    "tabulated knots must be strictly increasing in x",
                ));
            }
        }
        let xs: Vec<T> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<T> = knots.iter().map(|k| k.1).collect();

        // Thomas solve of the tridiagonal system for interior second derivatives.
        let two = T::lit(2.0);
        let six = T::lit(6.0);
        let mut sub = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        let mut sup = vec![T::zero(); n];
        let mut rhs = vec![T::zero(); n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            sub[i] = h0;
            diag[i] = two * (h0 + h1);
            sup[i] = h1;
            rhs[i] = six * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        }
        let mut m = vec![T::zero(); n];
        if n > 2 {
            // forward elimination over the interior rows
            for i in 2..n - 1 {
                let w = sub[i] / diag[i - 1];
                diag[i] = diag[i] - w * sup[i - 1];
                rhs[i] = rhs[i] - w * rhs[i - 1];
            }
            m[n - 2] = rhs[n - 2] / diag[n - 2];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
            }
        }
        Ok(Self { xs, ys, m })
    }

    pub fn domain(&self) -> (T, T) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn knots(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    fn segment(&self, x: T) -> Result<usize> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::OutOfDomain {
                x: x.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        let mut a = 0usize;
        let mut b = self.xs.len() - 1;
        while b - a > 1 {
            let mid = (a + b) / 2;
            if self.xs[mid] <= x {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(a)
    }

    pub fn value(&self, x: T) -> Result<T> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let six = T::lit(6.0);
        Ok(a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / six)
    }

    pub fn derivative(&self, x: T) -> Result<T> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        let three = T::lit(3.0);
        let six = T::lit(6.0);
        Ok((self.ys[i + 1] - self.ys[i]) / h
            + ((three * b * b - T::one()) * self.m[i + 1] - (three * a * a - T::one()) * self.m[i])
                * h
                / six)
    }

    pub fn second_derivative(&self, x: T) -> Result<T> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        Ok(a * self.m[i] + b * self.m[i + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knot_values_exactly() {
        let knots: Vec<(f64, f64)> = (0..11)
            .map(|i| {
                let x = i as f64 * 0.4 - 2.0;
                (x, (x * 1.3).sin())
            })
            .collect();
        let sp = CubicSpline::natural(&knots).unwrap();
        for &(x, y) in &knots {
            assert_eq!(sp.value(x).unwrap(), y);
        }
    }

    #[test]
    fn derivative_consistent_with_finite_differences() {
        let knots: Vec<(f64, f64)> = (0..101)
            .map(|i| {
                let x = i as f64 * 0.06 - 3.0;
                (x, (-x * x / 2.0).exp())
            })
            .collect();
        let sp = CubicSpline::natural(&knots).unwrap();
        let h = 1e-6;
        for i in 0..40 {
            let x = -2.5 + i as f64 * 0.12;
            let fd = (sp.value(x + h).unwrap() - sp.value(x - h).unwrap()) / (2.0 * h);
            let an = sp.derivative(x).unwrap();
            assert!((fd - an).abs() < 1e-8 * (1.0 + an.abs()), "x={x}");
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(CubicSpline::natural(&[(0.0f64, 1.0), (0.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn out_of_domain_errors() {
        let sp = CubicSpline::natural(&[(0.0f64, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        assert!(matches!(sp.value(2.5), Err(Error::OutOfDomain { .. })));
    }
}
