//! Verification identities: the JWKB error-function identity chain, the
//! improved-method error function η²/ħ², the probability current and its
//! divergence formula, the η boundedness margin, and turning-point
//! approach studies.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{uniform_step, ComplexField, RealField};
use crate::num::{cc, imag_unit, Real};
use crate::numeric::fd::derivative_uniform;
use crate::numeric::fit::linear_fit;
use crate::numeric::ode::{integrate_nodes, OdeConfig};
use crate::numeric::quad::{adaptive, tanh_sinh, QuadConfig};
use crate::potentials::Potential;
use crate::semiclassics::{
    momentum, momentum_derivative, momentum_second_derivative, PhysicalParams,
};
use crate::wavefunctions::{WaveMethod, WavefunctionSample};

/// The JWKB error function evaluated by three separately coded routes:
/// directly from k-derivatives, as −½ of the Schwarzian derivative of the
/// action, and as T''/T with T = k^{-1/2}.
#[derive(Debug, Clone)]
pub struct WjwkbForms<T: Real> {
    pub direct: ComplexField<T>,
    pub schwarzian: ComplexField<T>,
    pub amplitude: ComplexField<T>,
}

/// Point kernel for the three forms, from p, p' and p''. The Schwarzian is
/// scale invariant, so S' = p and S' = k give the same value.
pub fn w_jwkb_point<T: Real>(
    params: &PhysicalParams<T>,
    p: Complex<T>,
    dp: Complex<T>,
    ddp: Complex<T>,
) -> (Complex<T>, Complex<T>, Complex<T>) {
    let hbar = params.hbar;
    let k = p / hbar;
    let dk = dp / hbar;
    let ddk = ddp / hbar;

    // direct: 3 k'² / (4 k²) − k'' / (2 k)
    let direct = (dk * dk) * T::lit(3.0) / (k * k * T::lit(4.0)) - ddk / (k * T::lit(2.0));

    // −½ {S, x} with {S, x} = S'''/S' − (3/2)(S''/S')²
    let ratio = dp / p;
    let schwarzian =
        -(ddp / p - ratio * ratio * T::lit(1.5)) * T::lit(0.5);

    // T''/T with T = k^{-1/2}: T' = −½ k^{-3/2} k',
    // T'' = ¾ k^{-5/2} k'² − ½ k^{-3/2} k''
    let k_m12 = k.sqrt().inv();
    let k_m32 = k_m12 / k;
    let k_m52 = k_m32 / k;
    let t = k_m12;
    let t2 = k_m52 * (dk * dk) * T::lit(0.75) - k_m32 * ddk * T::lit(0.5);
    let amplitude = t2 / t;

    (direct, schwarzian, amplitude)
}

/// The three W_JWKB forms on a grid. Errors at turning points (k = 0) and
/// potential discontinuities.
pub fn w_jwkb<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
) -> Result<WjwkbForms<T>> {
    let mut direct = Vec::with_capacity(grid.len());
    let mut schwarzian = Vec::with_capacity(grid.len());
    let mut amplitude = Vec::with_capacity(grid.len());
    for &x in grid {
        let p = momentum(params, pot, x)?;
        if p.norm() == T::zero() {
            return Err(Error::TurningPoint { x: x.as_f64() });
        }
        let dp = momentum_derivative(params, pot, x)?;
        let ddp = momentum_second_derivative(params, pot, x)?;
        let (d, s, a) = w_jwkb_point(params, p, dp, ddp);
        direct.push(d);
        schwarzian.push(s);
        amplitude.push(a);
    }
    Ok(WjwkbForms {
        direct: ComplexField::new(grid.to_vec(), direct, "w_jwkb_direct")?,
        schwarzian: ComplexField::new(grid.to_vec(), schwarzian, "w_jwkb_schwarzian")?,
        amplitude: ComplexField::new(grid.to_vec(), amplitude, "w_jwkb_amplitude")?,
    })
}

/// Largest pairwise disagreement of the three forms, measured pointwise
/// relative to 1 + |direct|.
pub fn w_jwkb_max_disagreement<T: Real>(forms: &WjwkbForms<T>) -> T {
    let mut worst = T::zero();
    for i in 0..forms.direct.len() {
        let d = forms.direct.values()[i];
        let s = forms.schwarzian.values()[i];
        let a = forms.amplitude.values()[i];
        let denom = T::one() + d.norm();
        let pair = (d - s).norm().max((d - a).norm()).max((s - a).norm());
        worst = worst.max(pair / denom);
    }
    worst
}

/// Error function of the improved method: W = η²/ħ².
pub fn w_improved<T: Real>(eta: &ComplexField<T>, params: &PhysicalParams<T>) -> ComplexField<T> {
    let hbar2 = params.hbar * params.hbar;
    eta.map("w_improved", |_, e| e * e / hbar2)
}

/// Max of |a − b| over the grid with `trim` points dropped at each end,
/// where the finite-difference stencils are one-sided and noisier.
pub fn max_mismatch_trimmed<T: Real>(
    a: &ComplexField<T>,
    b: &ComplexField<T>,
    trim: usize,
) -> Result<T> {
    if !a.same_grid(b) {
        return Err(Error::GridMismatch);
    }
    let n = a.len();
    if n <= 2 * trim {
        return Err(Error::GridTooCoarse {
            needed: 2 * trim + 1,
            got: n,
        });
    }
    let mut worst = T::zero();
    for i in trim..n - trim {
        worst = worst.max((a.values()[i] - b.values()[i]).norm());
    }
    Ok(worst)
}

/// Probability current J = −(iħ/2m)(Ψ*Ψ' − Ψ'*Ψ) with Ψ' from 4th-order
/// centered differences. The combination is algebraically imaginary before
/// the prefactor, so the returned field is real to the last bit.
pub fn probability_current<T: Real>(sample: &WavefunctionSample<T>) -> Result<ComplexField<T>> {
    let grid = sample.psi.grid();
    let h = uniform_step(grid)?;
    let psi = sample.psi.values();
    let dpsi = derivative_uniform(psi, h)?;
    let pref = -imag_unit::<T>() * (sample.params.hbar / (T::lit(2.0) * sample.params.mass));
    let values = psi
        .iter()
        .zip(&dpsi)
        .map(|(&v, &dv)| {
            let flux = v.conj() * dv - dv.conj() * v;
            pref * flux
        })
        .collect();
    ComplexField::new(grid.to_vec(), values, "current")
}

/// Both sides of the current-divergence identity for the improved method:
/// dJ/dx (finite differences) against i(η² − η*²)/(2mħ) · |Ψ|².
pub fn current_divergence_check<T: Real>(
    sample: &WavefunctionSample<T>,
    eta: &ComplexField<T>,
) -> Result<(ComplexField<T>, ComplexField<T>)> {
    if sample.method != WaveMethod::ImprovedJwkb {
        return Err(Error::MethodMismatch {
            got: sample.method.name(),
        });
    }
    if !sample.psi.same_grid(eta) {
        return Err(Error::GridMismatch);
    }
    let grid = sample.psi.grid();
    let h = uniform_step(grid)?;
    let j = probability_current(sample)?;
    let dj = derivative_uniform(j.values(), h)?;
    let lhs = ComplexField::new(grid.to_vec(), dj, "current_divergence_lhs")?;

    let pref = imag_unit::<T>() / (T::lit(2.0) * sample.params.mass * sample.params.hbar);
    let values = eta
        .values()
        .iter()
        .zip(sample.psi.values())
        .map(|(&e, &psi)| {
            let e2 = e * e;
            let diff = e2 - e2.conj();
            pref * diff * psi.norm_sqr()
        })
        .collect();
    let rhs = ComplexField::new(grid.to_vec(), values, "current_divergence_rhs")?;
    Ok((lhs, rhs))
}

/// Cumulative ∫|p'| along the path from x0 to each grid node (always the
/// unsigned path integral). Segments adjacent to a turning point are
/// integrated with tanh-sinh; |p'| diverges like an inverse square root
/// there but stays integrable.
pub fn integrated_momentum_variation<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    quad: &QuadConfig<T>,
) -> Result<RealField<T>> {
    let n = grid.len();
    let mut values = vec![T::zero(); n];
    let lo = grid[0].min(params.x0);
    let hi = grid[n - 1].max(params.x0);
    let turning = if lo < hi {
        pot.turning_points(params.energy, lo, hi)?
    } else {
        Vec::new()
    };
    let near_turning = |a: T, b: T| turning.iter().any(|&t| t == a || t == b);
    let mut abs_dp = |y: T| -> Result<Complex<T>> {
        Ok(cc(momentum_derivative(params, pot, y)?.norm()))
    };

    for (targets, _dir) in [
        (
            {
                let mut v: Vec<(T, Option<usize>)> = turning
                    .iter()
                    .filter(|&&t| t > params.x0)
                    .map(|&t| (t, None))
                    .collect();
                for (i, &x) in grid.iter().enumerate().filter(|(_, &x)| x > params.x0) {
                    v.push((x, Some(i)));
                }
                v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                v
            },
            1,
        ),
        (
            {
                let mut v: Vec<(T, Option<usize>)> = turning
                    .iter()
                    .filter(|&&t| t < params.x0)
                    .map(|&t| (t, None))
                    .collect();
                for (i, &x) in grid.iter().enumerate().filter(|(_, &x)| x < params.x0) {
                    v.push((x, Some(i)));
                }
                v.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
                v
            },
            -1,
        ),
    ] {
        let mut cur = params.x0;
        let mut acc = T::zero();
        for (x, slot) in targets {
            if x != cur {
                let seg = if near_turning(cur.min(x), cur.max(x)) {
                    tanh_sinh(&mut abs_dp, cur, x, quad)?.value
                } else {
                    adaptive(&mut abs_dp, cur, x, quad)?.value
                };
                acc = acc + seg.re.abs();
                cur = x;
            }
            if let Some(i) = slot {
                values[i] = acc;
            }
        }
    }
    RealField::new(grid.to_vec(), values, "integrated_momentum_variation")
}

/// Margin of the boundedness inequality |η(x)| ≤ ∫_{x0}^{x} |p'(y)| dy:
/// margin(x) = ∫|p'| − |η(x)|, nonnegative up to solver tolerance for any
/// correction started from η(x0) = 0 on a real-momentum span.
pub fn eta_bound_margin<T: Real>(
    eta: &ComplexField<T>,
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    quad: &QuadConfig<T>,
) -> Result<RealField<T>> {
    let bound = integrated_momentum_variation(params, pot, eta.grid(), quad)?;
    let values = bound
        .values()
        .iter()
        .zip(eta.values())
        .map(|(&b, &e)| b - e.norm())
        .collect();
    RealField::new(eta.grid().to_vec(), values, "eta_bound_margin")
}

/// One row of the turning-point approach study.
#[derive(Debug, Clone, Copy)]
pub struct TurningPointRow<T: Real> {
    pub epsilon: T,
    /// |η(x_t ∓ ε)|; `None` when the ODE failed in the singular region.
    pub eta_abs: Option<T>,
    pub w_jwkb_abs: T,
}

#[derive(Debug, Clone)]
pub struct TurningPointStudy<T: Real> {
    pub rows: Vec<TurningPointRow<T>>,
    /// Log-log slope of |W_JWKB| against ε (−2 for a simple turning point).
    pub fitted_exponent: Option<T>,
    /// Largest measured |η| over the ε sequence.
    pub eta_sup: T,
    /// ∫_{x0}^{x_t} |p'|, the boundedness budget for η.
    pub eta_bound: T,
}

/// Probe the approach to a turning point `x_t` from the classically
/// allowed side: per ε, |η(x_t ∓ ε)| from the correction ODE continued
/// progressively toward the turning point, and |W_JWKB(x_t ∓ ε)|.
pub fn turning_point_study<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x_t: T,
    epsilons: &[T],
    ode: &OdeConfig<T>,
    quad: &QuadConfig<T>,
) -> Result<TurningPointStudy<T>> {
    let u_t = pot.evaluate(x_t)?;
    if (u_t - params.energy).abs() > T::lit(1e-8) * (T::one() + params.energy.abs()) {
        return Err(Error::invalid(format!(
            "x = {} is not a turning point: U = {}, E = {}",
            x_t.as_f64(),
            u_t.as_f64(),
            params.energy.as_f64()
        )));
    }
    if epsilons.is_empty() {
        return Err(Error::invalid("epsilon list is empty"));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let eps_min = *eps.last().unwrap();
    if eps_min < T::lit(1e-6) {
        return Err(Error::invalid("smallest epsilon must be at least 1e-6"));
    }
    let eps_max = eps[0];

    // allowed side: E > U just off the turning point
    let probe = eps_max;
    let left_allowed = params.energy > pot.evaluate(x_t - probe)?;
    let right_allowed = params.energy > pot.evaluate(x_t + probe)?;
    let side = if left_allowed {
        -T::one()
    } else if right_allowed {
        T::one()
    } else {
        return Err(Error::invalid(
            "neither side of the turning point is classically allowed at the probe distance",
        ));
    };

    // approach points x_t ∓ ε, ordered from farthest to closest
    let points: Vec<T> = eps.iter().map(|&e| x_t + side * e).collect();
    let start = params.x0;
    if (start - x_t) * side <= T::zero() || (start - points[0]) * side <= T::zero() {
        return Err(Error::invalid(
            "x0 must lie on the allowed side, farther from the turning point than the largest epsilon",
        ));
    }

    // progressive η continuation toward the turning point
    let zero = cc(T::zero());
    let mut eta_vals: Vec<Option<Complex<T>>> = vec![None; points.len()];
    let mut cur_x = start;
    let mut cur_eta = zero;
    let mut alive = true;
    for (i, &x) in points.iter().enumerate() {
        if alive {
            let nodes = [cur_x, x];
            match integrate_nodes(
                &mut |y, s: &[Complex<T>; 1]| {
                    let p = momentum(params, pot, y)?;
                    let dp = momentum_derivative(params, pot, y)?;
                    let two_i_over_hbar = imag_unit::<T>() * (T::lit(2.0) / params.hbar);
                    Ok([-dp - two_i_over_hbar * p * s[0]])
                },
                &nodes,
                [cur_eta],
                ode,
            ) {
                Ok(sol) => {
                    cur_eta = sol[1][0];
                    cur_x = x;
                    eta_vals[i] = Some(cur_eta);
                }
                Err(Error::OdeSingular { .. }) => {
                    alive = false; // recorded per-row, not fatal
                }
                Err(e) => return Err(e),
            }
        }
    }

    let mut rows = Vec::with_capacity(points.len());
    for (i, (&e, &x)) in eps.iter().zip(&points).enumerate() {
        let p = momentum(params, pot, x)?;
        let dp = momentum_derivative(params, pot, x)?;
        let ddp = momentum_second_derivative(params, pot, x)?;
        let (w, _, _) = w_jwkb_point(params, p, dp, ddp);
        rows.push(TurningPointRow {
            epsilon: e,
            eta_abs: eta_vals[i].map(|v| v.norm()),
            w_jwkb_abs: w.norm(),
        });
    }

    let ln_eps: Vec<T> = rows.iter().map(|r| r.epsilon.ln()).collect();
    let ln_w: Vec<T> = rows.iter().map(|r| r.w_jwkb_abs.ln()).collect();
    let fitted_exponent = if rows.len() >= 2 {
        Some(linear_fit(&ln_eps, &ln_w).0)
    } else {
        None
    };

    let eta_sup = rows
        .iter()
        .filter_map(|r| r.eta_abs)
        .fold(T::zero(), |a, v| a.max(v));

    // budget ∫_{x0}^{x_t} |p'| with the singular endpoint handled by
    // tanh-sinh
    let eta_bound = tanh_sinh(
        &mut |y: T| Ok(cc(momentum_derivative(params, pot, y)?.norm())),
        start,
        x_t,
        quad,
    )?
    .value
    .re
    .abs();

    Ok(TurningPointStudy {
        rows,
        fitted_exponent,
        eta_sup,
        eta_bound,
    })
}
