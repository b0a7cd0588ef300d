//! The linearized-Riccati correction η(x) and the full logarithmic
//! derivative f(x) = p(x) + η(x).
//!
//! The linearized equation −iħη' − iħp' + 2pη = 0 is realised three
//! independent ways:
//!
//! * `eta_integral` — the oscillatory integral
//!   η(x) = −∫_{x0}^{x} [p'(y) + C1] · e^{(2i/ħ)(S(y) − S(x))} dy,
//! * `f_closed` — the closed form
//!   f(x) = (2i/ħ) e^{−(2i/ħ)S(x)} (C2 + ∫_{x0}^{x} p²(y) e^{(2i/ħ)S(y)} dy),
//! * `eta_ode` — direct integration of η' = −p' − (2i/ħ) p η.
//!
//! Demanding Ψ ~ exp(iS/ħ) in regions of constant momentum fixes the
//! integration constants to C1 = 0 and C2 = ħ p(x0) / (2i); with any other
//! choice the closed form picks up a counter-propagating defect term of
//! modulus |p(x0)| (see `fix_constants`).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{strictly_increasing, ComplexField, RealField};
use crate::num::{cc, imag_unit, Real};
use crate::numeric::fd::derivative_uniform;
use crate::numeric::ode::{integrate_nodes, OdeConfig};
use crate::numeric::oscillatory::{cumulative_oscillatory, OscConfig};
use crate::potentials::Potential;
use crate::semiclassics::{momentum, momentum_derivative, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionMethod {
    IntegralForm,
    ClosedForm,
    OdeForm,
}

/// η and f on a shared grid together with the integration constants that
/// produced them.
#[derive(Debug, Clone)]
pub struct CorrectionSolution<T: Real> {
    pub eta: ComplexField<T>,
    pub f: ComplexField<T>,
    pub c1: Complex<T>,
    pub c2: Complex<T>,
    pub method: CorrectionMethod,
}

/// Constants that remove the unphysical counter-propagating term:
/// C1 = 0 and C2 = ħ p(x0) / (2i).
pub fn fix_constants<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let p0 = momentum(params, pot, params.x0)?;
    let two_i = imag_unit::<T>() * T::lit(2.0);
    Ok((cc(T::zero()), p0 * params.hbar / two_i))
}

/// Reject grids that touch a turning point or a discontinuity, and grids
/// that enter the `exclusion` neighbourhood of a turning point.
pub(crate) fn guard_grid<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    exclusion: T,
) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::GridTooCoarse { needed: 1, got: 0 });
    }
    if !strictly_increasing(grid) {
        return Err(Error::GridNotIncreasing);
    }
    let lo = grid[0].min(params.x0);
    let hi = grid[grid.len() - 1].max(params.x0);
    if lo < hi {
        let pad = exclusion.max(T::zero());
        for t in pot.turning_points(params.energy, lo - pad, hi + pad)? {
            for &x in grid {
                if (x - t).abs() < exclusion {
                    return Err(Error::TurningPointTooClose {
                        x: t.as_f64(),
                        exclusion: exclusion.as_f64(),
                    });
                }
            }
        }
    }
    for d in pot.discontinuities() {
        if grid.iter().any(|&x| x == d) {
            return Err(Error::AtDiscontinuity { x: d.as_f64() });
        }
    }
    Ok(())
}

/// Oscillatory-integral realisation of η. The phase is resolved with
/// panels capped at a quarter period; for discontinuous potentials the
/// cumulative integral restarts at each jump (the piecewise convention,
/// under which η ≡ 0 on constant segments for c1 = 0).
pub fn eta_integral<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    c1: Complex<T>,
    cfg: &OscConfig<T>,
    exclusion: T,
) -> Result<ComplexField<T>> {
    guard_grid(params, pot, grid, exclusion)?;
    let two_over_hbar = T::lit(2.0) / params.hbar;
    let breakpoints = pot.discontinuities();
    let out = cumulative_oscillatory(
        &mut |y| momentum(params, pot, y),
        &mut |y| Ok(momentum_derivative(params, pot, y)? + c1),
        two_over_hbar,
        params.x0,
        grid,
        &breakpoints,
        true,
        cfg,
    )?;
    let iu = imag_unit::<T>();
    let values = out
        .action
        .iter()
        .zip(&out.integral)
        .map(|(&s, &g)| -(iu * (s * -two_over_hbar)).exp() * g)
        .collect();
    ComplexField::new(grid.to_vec(), values, "eta")
}

/// Closed-form realisation of f. Same quadrature policy as
/// [`eta_integral`].
pub fn f_closed<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    c2: Complex<T>,
    cfg: &OscConfig<T>,
    exclusion: T,
) -> Result<ComplexField<T>> {
    guard_grid(params, pot, grid, exclusion)?;
    let two_over_hbar = T::lit(2.0) / params.hbar;
    let breakpoints = pot.discontinuities();
    let out = cumulative_oscillatory(
        &mut |y| momentum(params, pot, y),
        &mut |y| {
            let p = momentum(params, pot, y)?;
            Ok(p * p)
        },
        two_over_hbar,
        params.x0,
        grid,
        &breakpoints,
        false,
        cfg,
    )?;
    let iu = imag_unit::<T>();
    let pref = iu * two_over_hbar;
    let values = out
        .action
        .iter()
        .zip(&out.integral)
        .map(|(&s, &g)| pref * (iu * (s * -two_over_hbar)).exp() * (c2 + g))
        .collect();
    ComplexField::new(grid.to_vec(), values, "f")
}

/// Right-hand side of η' = −p' − (2i/ħ) p η.
fn eta_rhs<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
    eta: Complex<T>,
) -> Result<Complex<T>> {
    let p = momentum(params, pot, x)?;
    let dp = momentum_derivative(params, pot, x)?;
    let two_i_over_hbar = imag_unit::<T>() * (T::lit(2.0) / params.hbar);
    Ok(-dp - two_i_over_hbar * p * eta)
}

/// Direct ODE realisation of η, integrated left to right from `grid[0]`
/// where the initial value applies. At a potential discontinuity the
/// correction restarts at zero on the next continuous segment.
pub fn eta_ode<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    eta_at_start: Complex<T>,
    cfg: &OdeConfig<T>,
) -> Result<ComplexField<T>> {
    guard_grid(params, pot, grid, cfg.turning_point_exclusion)?;
    let zero = cc(T::zero());
    let n = grid.len();
    let mut values = vec![zero; n];

    // continuous segments of the grid, split at declared discontinuities
    let mut discont: Vec<T> = pot
        .discontinuities()
        .into_iter()
        .filter(|&d| d > grid[0] && d < grid[n - 1])
        .collect();
    discont.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut start_idx = 0usize;
    let mut init = eta_at_start;
    for boundary in discont.into_iter().map(Some).chain(std::iter::once(None)) {
        let end_idx = match boundary {
            Some(d) => grid[start_idx..].partition_point(|&x| x < d) + start_idx,
            None => n,
        };
        if end_idx > start_idx {
            let nodes = &grid[start_idx..end_idx];
            let sol = integrate_nodes(
                &mut |x, y: &[Complex<T>; 1]| Ok([eta_rhs(params, pot, x, y[0])?]),
                nodes,
                [init],
                cfg,
            )?;
            for (slot, y) in values[start_idx..end_idx].iter_mut().zip(sol) {
                *slot = y[0];
            }
        }
        start_idx = end_idx;
        init = zero; // piecewise restart after the jump
    }
    ComplexField::new(grid.to_vec(), values, "eta")
}

/// Assemble a [`CorrectionSolution`] from an η field by f = p + η.
pub fn solution_from_eta<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    eta: ComplexField<T>,
    c1: Complex<T>,
    c2: Complex<T>,
    method: CorrectionMethod,
) -> Result<CorrectionSolution<T>> {
    let mut f_vals = Vec::with_capacity(eta.len());
    for (&x, &e) in eta.grid().iter().zip(eta.values()) {
        f_vals.push(momentum(params, pot, x)? + e);
    }
    let f = ComplexField::new(eta.grid().to_vec(), f_vals, "f")?;
    Ok(CorrectionSolution {
        eta,
        f,
        c1,
        c2,
        method,
    })
}

/// Assemble a [`CorrectionSolution`] from an f field by η = f − p.
pub fn solution_from_f<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    f: ComplexField<T>,
    c1: Complex<T>,
    c2: Complex<T>,
    method: CorrectionMethod,
) -> Result<CorrectionSolution<T>> {
    let mut eta_vals = Vec::with_capacity(f.len());
    for (&x, &fv) in f.grid().iter().zip(f.values()) {
        eta_vals.push(fv - momentum(params, pot, x)?);
    }
    let eta = ComplexField::new(f.grid().to_vec(), eta_vals, "eta")?;
    Ok(CorrectionSolution {
        eta,
        f,
        c1,
        c2,
        method,
    })
}

/// Pointwise disagreement |f_a − f_b| / (1 + |f_a|) of two solutions on a
/// shared grid.
pub fn pointwise_residual<T: Real>(
    a: &CorrectionSolution<T>,
    b: &CorrectionSolution<T>,
) -> Result<RealField<T>> {
    if !a.f.same_grid(&b.f) {
        return Err(Error::GridMismatch);
    }
    let values = a
        .f
        .values()
        .iter()
        .zip(b.f.values())
        .map(|(&fa, &fb)| (fa - fb).norm() / (T::one() + fa.norm()))
        .collect();
    RealField::new(a.f.grid().to_vec(), values, "equivalence_residual")
}

/// Max over the grid of |f_a − f_b| / (1 + |f_a|).
pub fn equivalence_residual<T: Real>(
    a: &CorrectionSolution<T>,
    b: &CorrectionSolution<T>,
) -> Result<T> {
    let field = pointwise_residual(a, b)?;
    Ok(field
        .values()
        .iter()
        .fold(T::zero(), |acc, &v| acc.max(v)))
}

/// Riccati residual r = −iħ f' + f² − p², with f' from 4th-order centered
/// finite differences on a uniform grid. For a solution of the linearized
/// equation the exact identity f' = −(2i/ħ) p η makes r equal η².
pub fn riccati_residual<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    f: &ComplexField<T>,
) -> Result<ComplexField<T>> {
    if f.len() < 5 {
        return Err(Error::GridTooCoarse {
            needed: 5,
            got: f.len(),
        });
    }
    let h = crate::field::uniform_step(f.grid())?;
    let df = derivative_uniform(f.values(), h)?;
    let minus_i_hbar = -imag_unit::<T>() * params.hbar;
    let mut values = Vec::with_capacity(f.len());
    for ((&x, &fv), dfv) in f.grid().iter().zip(f.values()).zip(df) {
        let p = momentum(params, pot, x)?;
        values.push(minus_i_hbar * dfv + fv * fv - p * p);
    }
    ComplexField::new(f.grid().to_vec(), values, "riccati_residual")
}
