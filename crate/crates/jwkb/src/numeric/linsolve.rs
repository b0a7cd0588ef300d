//! Dense complex linear solve for the small matching systems.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::Real;

/// Gaussian elimination with partial pivoting. Consumes the matrix.
pub fn solve<T: Real>(mut a: Vec<Vec<Complex<T>>>, mut b: Vec<Complex<T>>) -> Result<Vec<Complex<T>>> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::invalid("linear system is not square"));
    }
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col][col].norm();
        for row in col + 1..n {
            let mag = a[row][col].norm();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == T::zero() || !best.is_finite() {
            return Err(Error::invalid("singular matching system"));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor.norm() == T::zero() {
                continue;
            }
            for k in col..n {
                let t = a[col][k] * factor;
                a[row][k] = a[row][k] - t;
            }
            let t = b[col] * factor;
            b[row] = b[row] - t;
        }
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut x = vec![zero; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
