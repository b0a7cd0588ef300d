//! Assembly of the standard-JWKB and improved-JWKB wavefunctions.
//!
//! Standard: Ψ(x) = k(x)^{-1/2} exp(±(i/ħ) S(x)), normalised to
//! Ψ(x0) = k(x0)^{-1/2}. Improved: Ψ(x) = exp((i/ħ) ∫_{x0}^{x} f(y) dy)
//! with f = p + η, normalised to Ψ(x0) = 1. The left-moving improved
//! solution is built from −p with its own correction rather than by
//! conjugation, so the construction stays valid beyond real potentials.

use num_complex::Complex;

use crate::corrections::guard_grid;
use crate::error::{Error, Result};
use crate::field::{uniform_step, ComplexField};
use crate::num::{cc, imag_unit, Real};
use crate::numeric::fd::second_derivative_uniform;
use crate::numeric::ode::{integrate_nodes, OdeConfig};
use crate::numeric::quad::QuadConfig;
use crate::potentials::Potential;
use crate::semiclassics::{
    action_field, momentum, momentum_derivative, wave_vector, PhysicalParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveMethod {
    ExactOracle,
    StandardJwkb,
    ImprovedJwkb,
}

impl WaveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            WaveMethod::ExactOracle => "exact",
            WaveMethod::StandardJwkb => "jwkb",
            WaveMethod::ImprovedJwkb => "improved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    RightMoving,
    LeftMoving,
}

impl Direction {
    fn sign<T: Real>(&self) -> T {
        match self {
            Direction::RightMoving => T::one(),
            Direction::LeftMoving => -T::one(),
        }
    }
}

/// A wavefunction sampled on a grid, finite at every grid point by
/// construction (grids containing k = 0 points are rejected).
#[derive(Debug, Clone)]
pub struct WavefunctionSample<T: Real> {
    pub psi: ComplexField<T>,
    pub method: WaveMethod,
    pub direction: Direction,
    pub params: PhysicalParams<T>,
}

fn reject_zero_momentum<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
) -> Result<()> {
    for &x in grid {
        if momentum(params, pot, x)?.norm() == T::zero() {
            return Err(Error::TurningPoint { x: x.as_f64() });
        }
    }
    Ok(())
}

/// Standard JWKB wavefunction Ψ(x) = k^{-1/2}(x) e^{±(i/ħ)S(x)}.
pub fn psi_jwkb<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    direction: Direction,
    quad: &QuadConfig<T>,
) -> Result<WavefunctionSample<T>> {
    reject_zero_momentum(params, pot, grid)?;
    let action = action_field(params, pot, grid, quad)?;
    let iu = imag_unit::<T>();
    let sign = direction.sign::<T>();
    let mut values = Vec::with_capacity(grid.len());
    for (&x, &s) in grid.iter().zip(action.values()) {
        let k = wave_vector(params, pot, x)?;
        let amp = k.sqrt().inv();
        values.push(amp * (iu * s * (sign / params.hbar)).exp());
    }
    Ok(WavefunctionSample {
        psi: ComplexField::new(grid.to_vec(), values, "psi_jwkb")?,
        method: WaveMethod::StandardJwkb,
        direction,
        params: *params,
    })
}

/// Improved-JWKB wavefunction together with the correction η it was built
/// from. The correction ODE is integrated from `params.x0` (η(x0) = 0, the
/// fixed-constant choice) with the running integral ∫η carried as an
/// augmented state, so Ψ needs no re-quadrature of sampled values.
pub fn psi_improved<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    direction: Direction,
    ode: &OdeConfig<T>,
    quad: &QuadConfig<T>,
) -> Result<(WavefunctionSample<T>, ComplexField<T>)> {
    guard_grid(params, pot, grid, ode.turning_point_exclusion)?;
    reject_zero_momentum(params, pot, grid)?;
    let n = grid.len();
    let zero = cc(T::zero());
    let sign = direction.sign::<T>();

    // d/dx [η, I] with I' = η; the direction flips the momentum branch
    let mut rhs = |x: T, y: &[Complex<T>; 2]| -> Result<[Complex<T>; 2]> {
        let p = momentum(params, pot, x)? * sign;
        let dp = momentum_derivative(params, pot, x)? * sign;
        let two_i_over_hbar = imag_unit::<T>() * (T::lit(2.0) / params.hbar);
        Ok([-dp - two_i_over_hbar * p * y[0], y[0]])
    };

    let mut eta = vec![zero; n];
    let mut integral = vec![zero; n];
    // walk right of x0 and left of x0 separately
    let right_idx: Vec<usize> = (0..n).filter(|&i| grid[i] > params.x0).collect();
    let left_idx: Vec<usize> = (0..n).filter(|&i| grid[i] < params.x0).collect();

    if !right_idx.is_empty() {
        let mut nodes = vec![params.x0];
        nodes.extend(right_idx.iter().map(|&i| grid[i]));
        let sol = integrate_nodes(&mut rhs, &nodes, [zero, zero], ode)?;
        for (slot, y) in right_idx.iter().zip(sol.into_iter().skip(1)) {
            eta[*slot] = y[0];
            integral[*slot] = y[1];
        }
    }
    if !left_idx.is_empty() {
        let mut nodes = vec![params.x0];
        nodes.extend(left_idx.iter().rev().map(|&i| grid[i]));
        let sol = integrate_nodes(&mut rhs, &nodes, [zero, zero], ode)?;
        for (slot, y) in left_idx.iter().rev().zip(sol.into_iter().skip(1)) {
            eta[*slot] = y[0];
            integral[*slot] = y[1];
        }
    }

    let action = action_field(params, pot, grid, quad)?;
    let iu = imag_unit::<T>();
    let inv_hbar = params.hbar.recip();
    let mut values = Vec::with_capacity(n);
    for (i, &s) in action.values().iter().enumerate() {
        // ∫ f = ±S + ∫η
        let phase = (s * sign + integral[i]) * inv_hbar;
        values.push((iu * phase).exp());
    }
    let sample = WavefunctionSample {
        psi: ComplexField::new(grid.to_vec(), values, "psi_improved")?,
        method: WaveMethod::ImprovedJwkb,
        direction,
        params: *params,
    };
    let eta_field = ComplexField::new(grid.to_vec(), eta, "eta")?;
    Ok((sample, eta_field))
}

/// Residual of the modified equation Ψ'' + (k² + W) Ψ = 0:
/// max over the interior grid of |Ψ'' + (k² + W)Ψ| / max|k²Ψ|, with Ψ''
/// from 4th-order centered differences. Requires a uniform grid resolving
/// the shortest local wavelength with at least nine points.
pub fn modified_equation_residual<T: Real>(
    sample: &WavefunctionSample<T>,
    pot: &Potential<T>,
    w: &ComplexField<T>,
) -> Result<T> {
    let grid = sample.psi.grid();
    if !sample.psi.same_grid(w) {
        return Err(Error::GridMismatch);
    }
    let h = uniform_step(grid)?;
    let n = grid.len();
    if n < 9 {
        return Err(Error::GridTooCoarse { needed: 9, got: n });
    }

    let params = &sample.params;
    let mut kk = Vec::with_capacity(n);
    let mut k_max = T::zero();
    for &x in grid {
        let k = wave_vector(params, pot, x)?;
        k_max = k_max.max(k.norm());
        kk.push(k * k);
    }
    // nine points per shortest local wavelength 2π/k
    if h * k_max > T::lit(2.0) * T::PI() / T::lit(9.0) {
        return Err(Error::GridTooCoarse {
            needed: (T::lit(2.0) * T::PI() / (h * k_max) * T::from_usize(n).unwrap())
                .as_f64() as usize,
            got: n,
        });
    }

    let psi = sample.psi.values();
    let d2 = second_derivative_uniform(psi, h)?;
    let mut scale = T::zero();
    for i in 0..n {
        scale = scale.max((kk[i] * psi[i]).norm());
    }
    let mut worst = T::zero();
    for i in 2..n - 2 {
        let res = d2[i] + (kk[i] + w.values()[i]) * psi[i];
        worst = worst.max(res.norm());
    }
    Ok(worst / scale)
}
