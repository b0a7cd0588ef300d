//! Embedded Dormand-Prince 5(4) integrator for small complex systems.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::num::Real;

#[derive(Debug, Clone, Copy)]
pub struct OdeConfig<T: Real> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_steps: usize,
    /// Grids handed to the correction solvers must stay at least this far
    /// from any turning point.
    pub turning_point_exclusion: T,
}

impl<T: Real> Default for OdeConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            max_steps: 20_000_000,
            turning_point_exclusion: T::lit(1e-3),
        }
    }
}

// Dormand-Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

type State<T, const N: usize> = [Complex<T>; N];

fn axpy<T: Real, const N: usize>(
    y: &State<T, N>,
    h: T,
    terms: &[(f64, &State<T, N>)],
) -> State<T, N> {
    let mut out = *y;
    for (c, k) in terms {
        let ch = h * T::lit(*c);
        for idx in 0..N {
            out[idx] = out[idx] + k[idx] * ch;
        }
    }
    out
}

/// Integrate `y' = f(x, y)` through the strictly monotone `nodes`
/// (increasing or decreasing), returning the solution at every node.
/// `nodes[0]` is the initial position carrying `y0`.
pub fn integrate_nodes<T: Real, const N: usize, F>(
    f: &mut F,
    nodes: &[T],
    y0: State<T, N>,
    cfg: &OdeConfig<T>,
) -> Result<Vec<State<T, N>>>
where
    F: FnMut(T, &State<T, N>) -> Result<State<T, N>>,
{
    if nodes.is_empty() {
        return Ok(Vec::new());
    }
    let increasing = nodes.windows(2).all(|w| w[0] < w[1]);
    let decreasing = nodes.windows(2).all(|w| w[0] > w[1]);
    if nodes.len() > 1 && !increasing && !decreasing {
        return Err(Error::invalid("ODE output nodes must be strictly monotone"));
    }

    let mut out = Vec::with_capacity(nodes.len());
    out.push(y0);
    let mut y = y0;
    let mut x = nodes[0];
    let dir = if nodes.len() > 1 && nodes[1] < nodes[0] {
        -T::one()
    } else {
        T::one()
    };

    let span = (nodes[nodes.len() - 1] - nodes[0]).abs();
    let mut h = dir * (span * T::lit(1e-2)).max(T::lit(1e-8));
    let mut steps = 0usize;

    for &target in &nodes[1..] {
        while (target - x) * dir > T::zero() {
            if steps >= cfg.max_steps {
                return Err(Error::OdeSingular { x: x.as_f64() });
            }
            steps += 1;

            // clamp onto the node
            if (x + h - target) * dir > T::zero() {
                h = target - x;
            }
            let h_floor = (x.abs().max(T::one())) * T::epsilon() * T::lit(32.0);
            if h.abs() < h_floor {
                return Err(Error::OdeSingular { x: x.as_f64() });
            }

            let k1 = f(x, &y)?;
            let k2 = f(x + h * T::lit(C2), &axpy(&y, h, &[(A21, &k1)]))?;
            let k3 = f(x + h * T::lit(C3), &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
            let k4 = f(
                x + h * T::lit(C4),
                &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            )?;
            let k5 = f(
                x + h * T::lit(C5),
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            )?;
            let k6 = f(
                x + h,
                &axpy(
                    &y,
                    h,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            )?;
            let y5 = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(x + h, &y5)?;

            // weighted RMS error norm of (5th - 4th)-order difference
            let mut err_sq = T::zero();
            for idx in 0..N {
                let e = k1[idx] * T::lit(E1)
                    + k3[idx] * T::lit(E3)
                    + k4[idx] * T::lit(E4)
                    + k5[idx] * T::lit(E5)
                    + k6[idx] * T::lit(E6)
                    + k7[idx] * T::lit(E7);
                let scale = cfg.abs_tol + cfg.rel_tol * y[idx].norm().max(y5[idx].norm());
                let r = e.norm() * h.abs() / scale;
                err_sq = err_sq + r * r;
            }
            let err = (err_sq / T::from_usize(N).unwrap()).sqrt();

            if err <= T::one() {
                x = x + h;
                y = y5;
            }
            let factor = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(T::lit(-0.2)))
                    .min(T::lit(5.0))
                    .max(T::lit(0.2))
            };
            h = h * factor;
        }
        x = target;
        out.push(y);
    }
    Ok(out)
}
