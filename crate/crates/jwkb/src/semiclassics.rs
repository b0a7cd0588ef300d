//! Classical momentum p(x) with a fixed complex branch, the wave vector
//! k(x) = p/ħ, and the classical action S(x) = ∫_{x0}^{x} p(y) dy.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{strictly_increasing, ComplexField};
use crate::num::{cc, Real};
use crate::numeric::quad::{adaptive, tanh_sinh, QuadConfig, QuadResult};
use crate::potentials::Potential;

/// Physical constants of a run: ħ, mass, total energy E and the reference
/// position x0 at which the action vanishes, S(x0) = 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct PhysicalParams<T: Real> {
    pub hbar: T,
    pub mass: T,
    pub energy: T,
    pub x0: T,
}

impl<T: Real> PhysicalParams<T> {
    pub fn new(hbar: T, mass: T, energy: T, x0: T) -> Result<Self> {
        let p = Self {
            hbar,
            mass,
            energy,
            x0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > T::zero()) {
            return Err(Error::invalid("hbar must be positive"));
        }
        if !(self.mass > T::zero()) {
            return Err(Error::invalid("mass must be positive"));
        }
        Ok(())
    }

    /// ħ = 1, m = 1 with the given energy, anchored at x0 = 0.
    pub fn natural(energy: T) -> Self {
        Self {
            hbar: T::one(),
            mass: T::one(),
            energy,
            x0: T::zero(),
        }
    }

    pub fn with_x0(self, x0: T) -> Self {
        Self { x0, ..self }
    }

    pub fn with_energy(self, energy: T) -> Self {
        Self { energy, ..self }
    }
}

/// Classical momentum √(2m(E−U)). Branch rule: real nonnegative where
/// E ≥ U, and +i√(2m(U−E)) where E < U, so Im p ≥ 0 everywhere.
pub fn momentum<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
) -> Result<Complex<T>> {
    let du = params.energy - pot.evaluate(x)?;
    let two_m = T::lit(2.0) * params.mass;
    if du >= T::zero() {
        Ok(cc((two_m * du).sqrt()))
    } else {
        Ok(Complex::new(T::zero(), (-two_m * du).sqrt()))
    }
}

/// Wave vector k = p/ħ on the same branch.
pub fn wave_vector<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
) -> Result<Complex<T>> {
    Ok(momentum(params, pot, x)? / params.hbar)
}

/// p'(x) = −m U'(x) / p(x), valid on both branches since p² = 2m(E−U).
pub fn momentum_derivative<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
) -> Result<Complex<T>> {
    let p = momentum(params, pot, x)?;
    if p.norm() == T::zero() {
        return Err(Error::TurningPoint { x: x.as_f64() });
    }
    let du = pot.derivative(x)?;
    Ok(cc(-params.mass * du) / p)
}

/// p''(x) = −m U''/p − m² U'² / p³.
pub fn momentum_second_derivative<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
) -> Result<Complex<T>> {
    let p = momentum(params, pot, x)?;
    if p.norm() == T::zero() {
        return Err(Error::TurningPoint { x: x.as_f64() });
    }
    let u1 = pot.derivative(x)?;
    let u2 = pot.second_derivative(x)?;
    let m = params.mass;
    let p3 = p * p * p;
    Ok(cc(-m * u2) / p - cc(m * m * u1 * u1) / p3)
}

/// Interior points of `(lo, hi)` where the momentum integrand must be
/// split: potential discontinuities and turning points. The `bool` marks
/// turning points, whose panels get the tanh-sinh treatment.
fn split_points<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    lo: T,
    hi: T,
) -> Result<Vec<(T, bool)>> {
    let mut splits: Vec<(T, bool)> = Vec::new();
    for d in pot.discontinuities() {
        if d > lo && d < hi {
            splits.push((d, false));
        }
    }
    for t in pot.turning_points(params.energy, lo, hi)? {
        if t > lo && t < hi {
            splits.push((t, true));
        }
    }
    splits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    splits.dedup_by(|a, b| a.0 == b.0);
    Ok(splits)
}

fn integrate_momentum_segment<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    a: T,
    b: T,
    singular_end: bool,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<T>> {
    let mut f = |y: T| momentum(params, pot, y);
    if singular_end {
        tanh_sinh(&mut f, a, b, cfg)
    } else {
        adaptive(&mut f, a, b, cfg)
    }
}

/// S(x) = ∫_{x0}^{x} p(y) dy with S(x0) = 0 exactly. The integral is split
/// at potential discontinuities and turning points; panels that touch a
/// turning point use tanh-sinh so the √ endpoint behaviour is integrated
/// accurately.
pub fn action<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    x: T,
    cfg: &QuadConfig<T>,
) -> Result<Complex<T>> {
    if x == params.x0 {
        return Ok(cc(T::zero()));
    }
    let (lo, hi, sign) = if x > params.x0 {
        (params.x0, x, T::one())
    } else {
        (x, params.x0, -T::one())
    };
    let splits = split_points(params, pot, lo, hi)?;
    let mut total = cc(T::zero());
    let mut left = lo;
    let mut left_singular = false;
    for (s, is_tp) in splits.iter().copied().chain(std::iter::once((hi, false))) {
        if s > left {
            let singular = left_singular || is_tp;
            total = total + integrate_momentum_segment(params, pot, left, s, singular, cfg)?.value;
        }
        left = s;
        left_singular = is_tp;
    }
    Ok(total * sign)
}

/// Action at every grid point, reusing panel sums: adjacent differences
/// equal the per-panel quadratures by construction.
pub fn action_field<T: Real>(
    params: &PhysicalParams<T>,
    pot: &Potential<T>,
    grid: &[T],
    cfg: &QuadConfig<T>,
) -> Result<ComplexField<T>> {
    if !strictly_increasing(grid) {
        return Err(Error::GridNotIncreasing);
    }
    let n = grid.len();
    let zero = cc(T::zero());
    let mut values = vec![zero; n];
    if n == 0 {
        return ComplexField::new(grid.to_vec(), values, "action");
    }

    let lo = grid[0].min(params.x0);
    let hi = grid[n - 1].max(params.x0);
    let splits = if lo < hi {
        split_points(params, pot, lo, hi)?
    } else {
        Vec::new()
    };
    let is_singular = |a: T, b: T| -> bool {
        splits
            .iter()
            .any(|&(s, tp)| tp && (s == a || s == b))
    };

    // walk rightward then leftward from x0, accumulating segment integrals
    let mut targets_right: Vec<(T, Option<usize>)> = splits
        .iter()
        .filter(|&&(s, _)| s > params.x0)
        .map(|&(s, _)| (s, None))
        .collect();
    for (i, &x) in grid.iter().enumerate().filter(|(_, &x)| x > params.x0) {
        targets_right.push((x, Some(i)));
    }
    targets_right.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut targets_left: Vec<(T, Option<usize>)> = splits
        .iter()
        .filter(|&&(s, _)| s < params.x0)
        .map(|&(s, _)| (s, None))
        .collect();
    for (i, &x) in grid.iter().enumerate().filter(|(_, &x)| x < params.x0) {
        targets_left.push((x, Some(i)));
    }
    targets_left.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    for targets in [targets_right, targets_left] {
        let mut cur = params.x0;
        let mut acc = zero;
        for (x, slot) in targets {
            if x != cur {
                let singular = is_singular(cur.min(x), cur.max(x));
                acc = acc
                    + integrate_momentum_segment(params, pot, cur, x, singular, cfg)?.value;
                cur = x;
            }
            if let Some(i) = slot {
                values[i] = acc;
            }
        }
    }

    ComplexField::new(grid.to_vec(), values, "action")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::linspace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quad() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn momentum_branch_examples() {
        let free = Potential::Constant { u0: 0.0 };
        let p = momentum(&PhysicalParams::natural(2.0), &free, 1.0).unwrap();
        assert_eq!(p, Complex::new(2.0, 0.0));

        let wall = Potential::Constant { u0: 1.0 };
        let p = momentum(&PhysicalParams::natural(0.5), &wall, 0.0).unwrap();
        assert!((p - Complex::new(0.0, 1.0)).norm() < 1e-15);

        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let p = momentum(&PhysicalParams::natural(2.0), &eckart, 0.0).unwrap();
        assert!((p.re - 2.0f64.sqrt()).abs() < 1e-14);
        assert_eq!(p.im, 0.0);
    }

    #[test]
    fn momentum_derivative_examples() {
        let c = Potential::Constant { u0: 1.0 };
        assert_eq!(
            momentum_derivative(&PhysicalParams::natural(3.0), &c, 2.2).unwrap(),
            Complex::new(0.0, 0.0)
        );

        let ramp: Potential<f64> = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let d = momentum_derivative(&PhysicalParams::natural(2.0), &ramp, 0.0).unwrap();
        assert!((d.re + 0.5).abs() < 1e-14);

        // finite difference of momentum as the oracle
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::natural(2.0);
        let h = 1e-6;
        let fd = (momentum(&params, &eckart, 1.0 + h).unwrap()
            - momentum(&params, &eckart, 1.0 - h).unwrap())
            / (2.0 * h);
        let an = momentum_derivative(&params, &eckart, 1.0).unwrap();
        assert!((an - fd).norm() < 1e-8);
    }

    #[test]
    fn momentum_second_derivative_against_fd() {
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::natural(2.0);
        let h = 1e-5;
        for x in [-1.3, 0.0, 0.7, 2.1] {
            let fd = (momentum_derivative(&params, &eckart, x + h).unwrap()
                - momentum_derivative(&params, &eckart, x - h).unwrap())
                / (2.0 * h);
            let an = momentum_second_derivative(&params, &eckart, x).unwrap();
            assert!((an - fd).norm() < 1e-7 * (1.0 + an.norm()), "x={x}");
        }
    }

    #[test]
    fn momentum_derivative_rejects_turning_point() {
        let ramp = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let params = PhysicalParams::natural(2.0);
        assert!(matches!(
            momentum_derivative(&params, &ramp, 2.0),
            Err(Error::TurningPoint { .. })
        ));
    }

    #[test]
    fn action_examples() {
        let free = Potential::Constant { u0: 0.0 };
        let params = PhysicalParams::natural(2.0); // p = 2, x0 = 0
        let s = action(&params, &free, 3.0, &quad()).unwrap();
        assert!((s.re - 6.0).abs() < 1e-12);
        assert_eq!(action(&params, &free, 0.0, &quad()).unwrap(), cc(0.0));

        // ∫_0^1 √(2(2−y)) dy = (8 − 2√2)/3, closed-form antiderivative
        let ramp = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let s = action(&params, &ramp, 1.0, &quad()).unwrap();
        let exact = (8.0 - 2.0 * 2.0f64.sqrt()) / 3.0;
        assert!((s.re - exact).abs() < 1e-11, "got {}", s.re);
    }

    #[test]
    fn action_through_turning_point_splits_branches() {
        // ramp: allowed on [0, 2), forbidden beyond; S(3) = real part up to
        // x_t plus i times the forbidden-segment magnitude
        let ramp = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let params = PhysicalParams::natural(2.0);
        let s = action(&params, &ramp, 3.0, &quad()).unwrap();
        // ∫_0^2 √(2(2−y)) dy = 8/3; ∫_2^3 √(2(y−2)) dy = 2√2/3
        assert!((s.re - 8.0 / 3.0).abs() < 1e-9, "re={}", s.re);
        assert!((s.im - 2.0 * 2.0f64.sqrt() / 3.0).abs() < 1e-9, "im={}", s.im);
    }

    #[test]
    fn action_field_examples() {
        let free = Potential::Constant { u0: 0.0 };
        let params = PhysicalParams::natural(2.0);
        let f = action_field(&params, &free, &[0.0], &quad()).unwrap();
        assert_eq!(f.values()[0], cc(0.0));

        let f = action_field(&params, &free, &[0.0, 1.0, 2.0], &quad()).unwrap();
        let expect = [0.0, 2.0, 4.0];
        for (v, e) in f.values().iter().zip(expect) {
            assert!((v.re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn action_field_matches_pointwise_action() {
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::natural(2.0);
        let grid = linspace(-3.0, 3.0, 2001);
        let f = action_field(&params, &eckart, &grid, &quad()).unwrap();
        for idx in (0..grid.len()).step_by(97) {
            let s = action(&params, &eckart, grid[idx], &quad()).unwrap();
            assert!(
                (f.values()[idx] - s).norm() < 1e-10,
                "x={}, field={:?}, point={s:?}",
                grid[idx],
                f.values()[idx]
            );
        }
    }

    #[test]
    fn branch_imaginary_part_nonnegative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gauss = Potential::Gaussian {
            u0: 2.0,
            center: 0.0,
            width: 1.0,
        };
        let params = PhysicalParams::natural(1.0);
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-4.0..4.0);
            let p = momentum(&params, &gauss, x).unwrap();
            assert!(p.im >= 0.0);
            assert!(p.re >= 0.0);
        }
    }

    #[test]
    fn action_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let params = PhysicalParams::natural(2.0);
        let cfg = quad();
        for _ in 0..20 {
            let a: f64 = rng.gen_range(-4.0..4.0);
            let b: f64 = rng.gen_range(-4.0..4.0);
            let s_a = action(&params, &eckart, a, &cfg).unwrap();
            let s_b = action(&params, &eckart, b, &cfg).unwrap();
            let seg = adaptive(&mut |y| momentum(&params, &eckart, y), a, b, &cfg)
                .unwrap()
                .value;
            let lhs = s_a + seg;
            assert!((lhs - s_b).norm() <= 1e-10 * (1.0 + s_b.norm()));
        }
    }

    #[test]
    fn action_derivative_is_momentum() {
        let gauss = Potential::Gaussian {
            u0: 1.0,
            center: 0.0,
            width: 1.0,
        };
        let params = PhysicalParams::natural(3.0);
        let grid = linspace(-2.0, 2.0, 801);
        let f = action_field(&params, &gauss, &grid, &quad()).unwrap();
        let h = grid[1] - grid[0];
        for idx in (1..grid.len() - 1).step_by(53) {
            let fd = (f.values()[idx + 1] - f.values()[idx - 1]) / (2.0 * h);
            let p = momentum(&params, &gauss, grid[idx]).unwrap();
            assert!((fd - p).norm() <= 1e-6 * (1.0 + p.norm()));
        }
    }
}
