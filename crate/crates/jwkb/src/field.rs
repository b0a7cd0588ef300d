//! Sampled fields on a shared one-dimensional grid.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::Real;

/// Complex-valued samples on a strictly increasing grid.
///
/// Carrier type for the momentum, action, correction, wavefunction and
/// diagnostic fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<T: Real> {
    grid: Vec<T>,
    values: Vec<Complex<T>>,
    label: String,
}

impl<T: Real> ComplexField<T> {
    pub fn new(grid: Vec<T>, values: Vec<Complex<T>>, label: impl Into<String>) -> Result<Self> {
        if !strictly_increasing(&grid) {
            return Err(Error::GridNotIncreasing);
        }
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "value count {} does not match grid count {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// New field on the same grid with mapped values.
    pub fn map(&self, label: impl Into<String>, mut f: impl FnMut(T, Complex<T>) -> Complex<T>) -> Self {
        let values = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| f(x, v))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
            label: label.into(),
        }
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid == other.grid
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc.max(v.norm()))
    }
}

/// Real-valued samples on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField<T: Real> {
    grid: Vec<T>,
    values: Vec<T>,
    label: String,
}

impl<T: Real> RealField<T> {
    pub fn new(grid: Vec<T>, values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        if !strictly_increasing(&grid) {
            return Err(Error::GridNotIncreasing);
        }
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "value count {} does not match grid count {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            label: label.into(),
        })
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn min_value(&self) -> T {
        self.values.iter().fold(T::infinity(), |acc, &v| acc.min(v))
    }
}

pub fn strictly_increasing<T: Real>(grid: &[T]) -> bool {
    grid.windows(2).all(|w| w[0] < w[1])
}

/// `n` equally spaced points with exact endpoints. Requires `n >= 2`, `a < b`.
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    assert!(n >= 2, "linspace needs at least two points");
    assert!(a < b, "linspace needs a < b");
    let nm1 = T::from_usize(n - 1).unwrap();
    let mut out: Vec<T> = (0..n)
        .map(|idx| a + (b - a) * T::from_usize(idx).unwrap() / nm1)
        .collect();
    out[0] = a;
    out[n - 1] = b;
    out
}

/// Grid step of a uniform grid. Errors when spacing varies by more than
/// a relative 1e-9.
pub fn uniform_step<T: Real>(grid: &[T]) -> Result<T> {
    if grid.len() < 2 {
        return Err(Error::GridTooCoarse {
            needed: 2,
            got: grid.len(),
        });
    }
    let h = grid[1] - grid[0];
    let tol = T::lit(1e-9) * h.abs();
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > tol {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn rejects_non_increasing_grid() {
        let err = ComplexField::<f64>::new(
            vec![0.0, 0.0, 1.0],
            vec![Complex::new(0.0, 0.0); 3],
            "x",
        )
        .unwrap_err();
        assert_eq!(err, Error::GridNotIncreasing);
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(ComplexField::<f64>::new(vec![0.0, 1.0], vec![Complex::new(0.0, 0.0); 3], "x").is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(-1.0f64, 2.0, 7);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[6], 2.0);
        assert_eq!(g.len(), 7);
        assert!(strictly_increasing(&g));
        assert!(uniform_step(&g).is_ok());
    }

    #[test]
    fn uniform_step_detects_jitter() {
        let g = vec![0.0f64, 1.0, 2.0, 3.5];
        assert_eq!(uniform_step(&g).unwrap_err(), Error::NonUniformGrid);
    }
}
