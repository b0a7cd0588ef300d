//! Exact reference solutions of the one-dimensional Schrödinger equation:
//! Numerov integration for smooth potentials and analytic matching for the
//! piecewise-constant families.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{linspace, uniform_step, ComplexField};
use crate::num::{cc, imag_unit, Real};
use crate::numeric::fd::derivative_at_start;
use crate::potentials::Potential;
use crate::semiclassics::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScatterMethod {
    ExactAnalytic,
    ExactNumerov,
    StandardJwkb,
    ImprovedJwkb,
}

impl ScatterMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ScatterMethod::ExactAnalytic => "exact_analytic",
            ScatterMethod::ExactNumerov => "exact_numerov",
            ScatterMethod::StandardJwkb => "jwkb",
            ScatterMethod::ImprovedJwkb => "improved",
        }
    }
}

/// Transmission/reflection pair with method provenance.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringResult<T: Real> {
    pub transmission: T,
    pub reflection: T,
    pub method: ScatterMethod,
    pub energy: T,
}

/// g(x) = (2m/ħ²)(E − U) sampled on the grid. At a node that coincides
/// with a declared discontinuity the two one-sided limits are averaged,
/// which restores the Numerov convergence order across the jump.
fn g_samples<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
) -> Result<Vec<T>> {
    let pref = T::lit(2.0) * params.mass / (params.hbar * params.hbar);
    let discont = pot.discontinuities();
    let h = if grid.len() > 1 {
        grid[1] - grid[0]
    } else {
        T::one()
    };
    let snap = h * T::lit(1e-9);
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let u = match discont.iter().find(|&&d| (x - d).abs() <= snap) {
            Some(&d) => {
                let delta = h * T::lit(1e-3);
                let half = T::lit(0.5);
                half * (pot.evaluate(d - delta)? + pot.evaluate(d + delta)?)
            }
            None => pot.evaluate(x)?,
        };
        out.push(pref * (params.energy - u));
    }
    Ok(out)
}

/// Numerov recursion for Ψ'' + g(x) Ψ = 0 on a uniform grid, seeded with
/// the first two values. Sixth local order; the global phase error scales
/// as h⁴.
pub fn numerov_solve<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    psi0: Complex<T>,
    psi1: Complex<T>,
) -> Result<ComplexField<T>> {
    let h = uniform_step(grid)?;
    let n = grid.len();
    if n < 3 {
        return Err(Error::GridTooCoarse { needed: 3, got: n });
    }
    let g = g_samples(params, pot, grid)?;
    let w = h * h / T::lit(12.0);
    let two = T::lit(2.0);
    let five = T::lit(5.0);

    let mut values = Vec::with_capacity(n);
    values.push(psi0);
    values.push(psi1);
    for i in 1..n - 1 {
        let c_next = T::one() + w * g[i + 1];
        let c_mid = two * (T::one() - five * w * g[i]);
        let c_prev = T::one() + w * g[i - 1];
        let next = (values[i] * c_mid - values[i - 1] * c_prev) / c_next;
        values.push(next);
    }
    ComplexField::new(grid.to_vec(), values, "psi_numerov")
}

fn plane_wavenumber<T: Real>(params: &PhysicalParams<T>, u: T) -> Result<T> {
    let du = params.energy - u;
    if du <= T::zero() {
        return Err(Error::EvanescentSide {
            energy: params.energy.as_f64(),
            u_side: u.as_f64(),
        });
    }
    Ok((T::lit(2.0) * params.mass * du).sqrt() / params.hbar)
}

/// Exact step-potential transmission from continuity of Ψ and Ψ' (the
/// logarithmic derivative plus amplitude bookkeeping), keeping the
/// counter-propagating reflected wave on the incident side:
/// T = 4 k₁k₂/(k₁+k₂)², R = (k₁−k₂)²/(k₁+k₂)².
pub fn step_exact<T: Real>(
    params: &PhysicalParams<T>,
    u_left: T,
    u_right: T,
) -> Result<ScatteringResult<T>> {
    let k1 = plane_wavenumber(params, u_left)?;
    let k2 = plane_wavenumber(params, u_right)?;
    let sum = k1 + k2;
    let t = T::lit(4.0) * k1 * k2 / (sum * sum);
    let r = ((k1 - k2) / sum) * ((k1 - k2) / sum);
    Ok(ScatteringResult {
        transmission: t,
        reflection: r,
        method: ScatterMethod::ExactAnalytic,
        energy: params.energy,
    })
}

/// Exact above-barrier transmission of a rectangular barrier of height u0
/// on a zero background, from the two-interface transfer matrix:
/// T = [1 + (k₁²−k₂²)² sin²(k₂ w) / (4 k₁² k₂²)]^{-1}.
pub fn rectangular_exact<T: Real>(
    params: &PhysicalParams<T>,
    u0: T,
    width: T,
) -> Result<ScatteringResult<T>> {
    let k1 = plane_wavenumber(params, T::zero())?;
    let k2 = plane_wavenumber(params, u0)?;
    let k1s = k1 * k1;
    let k2s = k2 * k2;
    let s = (k2 * width).sin();
    let t = (T::one() + (k1s - k2s) * (k1s - k2s) * s * s / (T::lit(4.0) * k1s * k2s)).recip();
    Ok(ScatteringResult {
        transmission: t,
        reflection: T::one() - t,
        method: ScatterMethod::ExactAnalytic,
        energy: params.energy,
    })
}

fn check_flat_asymptote<T: Real>(pot: &Potential<T>, x: T, inward: T) -> Result<()> {
    let u = pot.evaluate(x)?;
    let tol = T::lit(1e-10) * (T::one() + u.abs());
    for j in 1..=3 {
        let probe = x + inward * T::from_i32(j).unwrap() * T::lit(1e-3);
        if (pot.evaluate(probe)? - u).abs() > tol {
            return Err(Error::AsymptoteNotConstant { x: x.as_f64() });
        }
    }
    Ok(())
}

/// One Numerov transmission computation at a given resolution. Integrates
/// from the transmitted side leftward with a pure outgoing wave, then
/// decomposes the solution at the incident end into incident/reflected
/// plane waves through a value-and-derivative solve at a single point.
fn transmission_numerov_at<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    a: T,
    b: T,
    n: usize,
    k1: T,
    k2: T,
) -> Result<(T, T)> {
    let grid = linspace(a, b, n);
    let h = grid[1] - grid[0];

    // seed the two rightmost values with t·e^{i k₂ x}, t = 1, and run the
    // symmetric recursion right-to-left
    let iu = imag_unit::<T>();
    let g = g_samples(params, pot, &grid)?;
    let w = h * h / T::lit(12.0);
    let two = T::lit(2.0);
    let five = T::lit(5.0);

    let mut values = vec![cc(T::zero()); n];
    values[n - 1] = (iu * (k2 * grid[n - 1])).exp();
    values[n - 2] = (iu * (k2 * grid[n - 2])).exp();
    for i in (1..n - 1).rev() {
        let c_prev = T::one() + w * g[i - 1];
        let c_mid = two * (T::one() - five * w * g[i]);
        let c_next = T::one() + w * g[i + 1];
        values[i - 1] = (values[i] * c_mid - values[i + 1] * c_next) / c_prev;
    }

    // Ψ(a) = A e^{i k₁ a} + B e^{-i k₁ a}
    let psi_a = values[0];
    let dpsi_a = derivative_at_start(&values, h)?;
    let ik1 = iu * k1;
    let half = T::lit(0.5);
    let e_minus = (-ik1 * a).exp();
    let e_plus = (ik1 * a).exp();
    let amp_in = (psi_a + dpsi_a / ik1) * half * e_minus;
    let amp_ref = (psi_a - dpsi_a / ik1) * half * e_plus;

    let t = (k2 / k1) / amp_in.norm_sqr();
    let r = amp_ref.norm_sqr() / amp_in.norm_sqr();
    Ok((t, r))
}

/// Exact transmission for a barrier with flat asymptotes on `[a, b]`,
/// with the grid refined (h halved, nodes kept) until one refinement
/// changes T by less than 1e-8.
pub fn transmission_numerov<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    domain: (T, T),
) -> Result<ScatteringResult<T>> {
    let (a, b) = domain;
    if !(a < b) {
        return Err(Error::invalid("domain needs a < b"));
    }
    check_flat_asymptote(pot, a, T::one())?;
    check_flat_asymptote(pot, b, -T::one())?;
    let k1 = plane_wavenumber(params, pot.evaluate(a)?)?;
    let k2 = plane_wavenumber(params, pot.evaluate(b)?)?;

    // initial resolution: ≥ 50 points per shortest wavelength, odd count so
    // that midpoint-symmetric discontinuities stay on nodes under
    // refinement n -> 2n - 1
    let u_min = {
        let mut best = pot.evaluate(a)?;
        for i in 0..=128 {
            let x = a + (b - a) * T::from_i32(i).unwrap() / T::lit(128.0);
            best = best.min(pot.evaluate(x)?);
        }
        best
    };
    let k_max = ((T::lit(2.0) * params.mass * (params.energy - u_min)).max(T::zero())).sqrt()
        / params.hbar;
    let ppw = T::lit(50.0);
    let n0 = ((b - a) * k_max * ppw / (T::lit(2.0) * T::PI()))
        .ceil()
        .to_usize()
        .unwrap_or(1001)
        .max(1001);

    // align declared discontinuities with grid nodes where a nearby
    // interval count allows it; alignment survives the h/2 refinements
    let q0 = n0; // intervals
    let fractions: Vec<T> = pot
        .discontinuities()
        .into_iter()
        .filter(|&d| d > a && d < b)
        .map(|d| (d - a) / (b - a))
        .collect();
    let mut q_best = q0;
    if !fractions.is_empty() {
        'search: for q in q0..q0 * 2 + 8 {
            let qf = T::from_usize(q).unwrap();
            for &f in &fractions {
                let prod = f * qf;
                if (prod - prod.round()).abs() > T::lit(1e-9) {
                    continue 'search;
                }
            }
            q_best = q;
            break;
        }
    }
    let mut n = q_best + 1;

    let tol = T::lit(1e-8);
    let (mut t_prev, _) = transmission_numerov_at(params, pot, a, b, n, k1, k2)?;
    let mut last_change = T::infinity();
    for _ in 0..9 {
        n = 2 * n - 1;
        if n > 5_000_000 {
            break;
        }
        let (t, r) = transmission_numerov_at(params, pot, a, b, n, k1, k2)?;
        last_change = (t - t_prev).abs();
        t_prev = t;
        if last_change < tol {
            return Ok(ScatteringResult {
                transmission: t,
                reflection: r,
                method: ScatterMethod::ExactNumerov,
                energy: params.energy,
            });
        }
    }
    Err(Error::ResolutionNotConverged {
        last_change: last_change.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerov_reproduces_plane_wave() {
        // U ≡ 0, E = 2 (k = 2), h = 1e-3 over ten wavelengths
        let free = Potential::Constant { u0: 0.0 };
        let params = PhysicalParams::natural(2.0);
        let lambda = std::f64::consts::PI;
        let span = 10.0 * lambda;
        let n = (span / 1e-3).round() as usize + 1;
        let grid = linspace(0.0, span, n);
        let psi0 = Complex::new(0.0, 2.0 * grid[0]).exp();
        let psi1 = Complex::new(0.0, 2.0 * grid[1]).exp();
        let sol = numerov_solve(&params, &free, &grid, psi0, psi1).unwrap();
        let mut worst = 0.0f64;
        for (&x, &v) in grid.iter().zip(sol.values()) {
            worst = worst.max((v - Complex::new(0.0, 2.0 * x).exp()).norm());
        }
        assert!(worst <= 1e-9, "worst={worst}");
    }

    #[test]
    fn numerov_rejects_non_uniform_grid() {
        let free = Potential::Constant { u0: 0.0 };
        let params = PhysicalParams::natural(2.0);
        let grid = vec![0.0, 0.1, 0.3];
        assert!(matches!(
            numerov_solve(&params, &free, &grid, cc(1.0), cc(1.0)),
            Err(Error::NonUniformGrid)
        ));
    }

    #[test]
    fn numerov_flux_constant_on_eckart() {
        let pot = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::natural(4.0);
        let grid = linspace(-13.0, 13.0, 20001);
        let k = (2.0f64 * 4.0).sqrt();
        let psi0 = Complex::new(0.0, k * grid[0]).exp();
        let psi1 = Complex::new(0.0, k * grid[1]).exp();
        let sol = numerov_solve(&params, &pot, &grid, psi0, psi1).unwrap();
        let sample = crate::wavefunctions::WavefunctionSample {
            psi: sol,
            method: crate::wavefunctions::WaveMethod::ExactOracle,
            direction: crate::wavefunctions::Direction::RightMoving,
            params,
        };
        let j = crate::diagnostics::probability_current(&sample).unwrap();
        let mid = j.values()[j.len() / 2].re;
        let mut worst = 0.0f64;
        for &v in &j.values()[4..j.len() - 4] {
            worst = worst.max((v.re - mid).abs());
        }
        assert!(worst <= 1e-8 * mid.abs(), "worst={worst}, mid={mid}");
    }

    #[test]
    fn step_exact_examples() {
        // no step: T = 1, R = 0
        let params = PhysicalParams::<f64>::natural(2.0);
        let r = step_exact(&params, 0.0, 0.0).unwrap();
        assert_eq!(r.transmission, 1.0);
        assert_eq!(r.reflection, 0.0);

        // E = 2 over {0, 1.5}: k1 = 2, k2 = 1 -> T = 8/9 (hand algebra)
        let r = step_exact(&params, 0.0, 1.5).unwrap();
        assert!((r.transmission - 8.0 / 9.0).abs() < 1e-12);
        assert!((r.transmission + r.reflection - 1.0).abs() < 1e-15);

        // threshold limit k2 -> 0+alpha: T -> 0
        let params = PhysicalParams::natural(1.5 + 1e-12);
        let r = step_exact(&params, 0.0, 1.5).unwrap();
        assert!(r.transmission < 1e-5);

        // evanescent side rejected
        let params = PhysicalParams::natural(1.0);
        assert!(matches!(
            step_exact(&params, 0.0, 1.5),
            Err(Error::EvanescentSide { .. })
        ));
    }

    #[test]
    fn rectangular_exact_examples() {
        // transmission resonance at k2 w = pi
        let e_res = 1.0f64 + std::f64::consts::PI.powi(2) / 2.0;
        let r = rectangular_exact(&PhysicalParams::natural(e_res), 1.0, 1.0).unwrap();
        assert!((r.transmission - 1.0).abs() < 1e-12);

        // no barrier
        let r = rectangular_exact(&PhysicalParams::natural(2.0), 0.0, 1.0).unwrap();
        assert_eq!(r.transmission, 1.0);

        // E=2, u0=1, w=1: k1=2, k2=√2 -> T = [1 + 4 sin²(√2)/32]^{-1}
        let r = rectangular_exact(&PhysicalParams::natural(2.0), 1.0, 1.0).unwrap();
        let expect = 1.0 / (1.0 + 4.0 * 2.0f64.sqrt().sin().powi(2) / 32.0);
        assert!((r.transmission - expect).abs() < 1e-14);
        assert!((expect - 0.8913).abs() < 1e-4, "sanity: {expect}");

        assert!(rectangular_exact(&PhysicalParams::natural(0.5), 1.0, 1.0).is_err());
    }

    #[test]
    fn transmission_numerov_matches_step_exact() {
        let step = Potential::Step {
            u_left: 0.0,
            u_right: 1.5,
            x_step: 0.0,
        };
        let params = PhysicalParams::<f64>::natural(2.0);
        let exact = step_exact(&params, 0.0, 1.5).unwrap();
        let num = transmission_numerov(&params, &step, (-6.0, 6.0)).unwrap();
        assert!(
            (num.transmission - exact.transmission).abs() <= 1e-8,
            "numerov={}, exact={}",
            num.transmission,
            exact.transmission
        );
        assert!((num.transmission + num.reflection - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn transmission_numerov_matches_rectangular_exact() {
        let rect = Potential::RectangularBarrier {
            u0: 1.0,
            x_left: 0.0,
            x_right: 1.0,
        };
        let params = PhysicalParams::<f64>::natural(2.0);
        let exact = rectangular_exact(&params, 1.0, 1.0).unwrap();
        // domain symmetric about the barrier so both interfaces sit on
        // nodes: [-3, 4] with the interfaces at integer offsets
        let num = transmission_numerov(&params, &rect, (-3.0, 4.0)).unwrap();
        assert!(
            (num.transmission - exact.transmission).abs() <= 1e-8,
            "numerov={}, exact={}",
            num.transmission,
            exact.transmission
        );
        assert!((num.transmission + num.reflection - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn transmission_numerov_unitary_on_eckart() {
        let pot = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::<f64>::natural(2.0);
        let r = transmission_numerov(&params, &pot, (-13.0, 13.0)).unwrap();
        assert!((r.transmission + r.reflection - 1.0).abs() <= 1e-9);
        assert!(r.transmission > 0.9 && r.transmission < 1.0);
    }

    #[test]
    fn transmission_numerov_reciprocity() {
        // swapping the asymptotic sides leaves T unchanged
        let step = Potential::Step {
            u_left: 0.0,
            u_right: 1.5,
            x_step: 0.0,
        };
        let swapped = Potential::Step {
            u_left: 1.5,
            u_right: 0.0,
            x_step: 0.0,
        };
        let params = PhysicalParams::<f64>::natural(2.5);
        let fwd = transmission_numerov(&params, &step, (-6.0, 6.0)).unwrap();
        let bwd = transmission_numerov(&params, &swapped, (-6.0, 6.0)).unwrap();
        assert!((fwd.transmission - bwd.transmission).abs() <= 1e-8);
    }

    #[test]
    fn numerov_global_order_is_four() {
        // refinement study on the plane-wave case: fitted order 4 ± 0.3.
        // Grids sit in the truncation-dominated regime; much finer ones
        // bottom out on a ~4e-10 roundoff-dispersion floor of the
        // three-term recursion.
        let free = Potential::Constant { u0: 0.0 };
        let params = PhysicalParams::natural(2.0);
        let span = 10.0 * std::f64::consts::PI;
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for n in [394usize, 787, 1572] {
            let grid = linspace(0.0, span, n);
            let psi0 = Complex::new(0.0, 2.0 * grid[0]).exp();
            let psi1 = Complex::new(0.0, 2.0 * grid[1]).exp();
            let sol = numerov_solve(&params, &free, &grid, psi0, psi1).unwrap();
            let mut worst = 0.0f64;
            for (&x, &v) in grid.iter().zip(sol.values()) {
                worst = worst.max((v - Complex::new(0.0, 2.0 * x).exp()).norm());
            }
            hs.push((grid[1] - grid[0]).ln());
            errs.push(worst.ln());
        }
        let (order, _) = crate::numeric::fit::linear_fit(&hs, &errs);
        assert!((order - 4.0).abs() <= 0.3, "order={order}");
    }

    #[test]
    fn asymptote_guard_rejects_ramp() {
        let ramp = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let params = PhysicalParams::natural(20.0);
        assert!(matches!(
            transmission_numerov(&params, &ramp, (-5.0, 5.0)),
            Err(Error::AsymptoteNotConstant { .. })
        ));
    }
}
