//! Catalog of one-dimensional potentials U(x) with exact derivatives,
//! declared discontinuities and turning-point location.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;
use crate::numeric::rootfind::scan_roots;
use crate::numeric::spline::CubicSpline;

/// Spline-backed tabulated potential. Natural cubic interpolation keeps the
/// second derivative defined everywhere inside the knot span.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(
    try_from = "TabulatedKnots<T>",
    into = "TabulatedKnots<T>",
    bound(
        serialize = "T: Real + Serialize",
        deserialize = "T: Real + serde::de::DeserializeOwned"
    )
)]
pub struct Tabulated<T: Real> {
    knots: Vec<(T, T)>,
    spline: CubicSpline<T>,
}

#[derive(Serialize, Deserialize)]
struct TabulatedKnots<T> {
    knots: Vec<(T, T)>,
}

impl<T: Real> Tabulated<T> {
    pub fn new(knots: Vec<(T, T)>) -> Result<Self> {
        let spline = CubicSpline::natural(&knots)?;
        Ok(Self { knots, spline })
    }

    pub fn knots(&self) -> &[(T, T)] {
        &self.knots
    }

    pub fn spline(&self) -> &CubicSpline<T> {
        &self.spline
    }
}

impl<T: Real + serde::de::DeserializeOwned> TryFrom<TabulatedKnots<T>> for Tabulated<T> {
    type Error = Error;
    fn try_from(raw: TabulatedKnots<T>) -> Result<Self> {
        Tabulated::new(raw.knots)
    }
}

impl<T: Real> From<Tabulated<T>> for TabulatedKnots<T> {
    fn from(t: Tabulated<T>) -> Self {
        TabulatedKnots { knots: t.knots }
    }
}

/// The potential family catalog. All values are in energy units; positions
/// in length units.
///
/// Conventions for the piecewise families: `Step` takes `u_left` for
/// `x < x_step` and `u_right` for `x >= x_step`; `RectangularBarrier` is
/// `u0` on `[x_left, x_right]` and zero outside. `Eckart` is
/// `u0 · sech²(x/width)`; `Gaussian` is `u0 · exp(-(x-center)²/(2·width²))`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(
    tag = "family",
    rename_all = "snake_case",
    bound(
        serialize = "T: Real + Serialize",
        deserialize = "T: Real + serde::de::DeserializeOwned"
    )
)]
pub enum Potential<T: Real> {
    Constant { u0: T },
    Step { u_left: T, u_right: T, x_step: T },
    RectangularBarrier { u0: T, x_left: T, x_right: T },
    Eckart { u0: T, width: T },
    Gaussian { u0: T, center: T, width: T },
    LinearRamp { slope: T, intercept: T },
    Tabulated(Tabulated<T>),
}

impl<T: Real> Potential<T> {
    pub fn tabulated(knots: Vec<(T, T)>) -> Result<Self> {
        Ok(Potential::Tabulated(Tabulated::new(knots)?))
    }

    /// Structural validation of the family parameters.
    pub fn validate(&self) -> Result<()> {
        match self {
            Potential::Eckart { width, .. } | Potential::Gaussian { width, .. } => {
                if *width <= T::zero() {
                    return Err(Error::invalid("potential width must be positive"));
                }
            }
            Potential::RectangularBarrier { x_left, x_right, .. } => {
                if !(x_left < x_right) {
                    return Err(Error::invalid("barrier needs x_left < x_right"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Knot span for tabulated potentials; analytic families are unbounded.
    pub fn domain(&self) -> Option<(T, T)> {
        match self {
            Potential::Tabulated(t) => Some(t.spline().domain()),
            _ => None,
        }
    }

    /// Positions where U jumps. Downstream grids are split here and U' is
    /// never evaluated at these points.
    pub fn discontinuities(&self) -> Vec<T> {
        match self {
            Potential::Step { x_step, .. } => vec![*x_step],
            Potential::RectangularBarrier { x_left, x_right, .. } => vec![*x_left, *x_right],
            _ => Vec::new(),
        }
    }

    pub fn evaluate(&self, x: T) -> Result<T> {
        match self {
            Potential::Constant { u0 } => Ok(*u0),
            Potential::Step {
                u_left,
                u_right,
                x_step,
            } => Ok(if x < *x_step { *u_left } else { *u_right }),
            Potential::RectangularBarrier { u0, x_left, x_right } => {
                Ok(if x >= *x_left && x <= *x_right {
                    *u0
                } else {
                    T::zero()
                })
            }
            Potential::Eckart { u0, width } => {
                let s = (x / *width).cosh().recip();
                Ok(*u0 * s * s)
            }
            Potential::Gaussian { u0, center, width } => {
                let t = (x - *center) / *width;
                Ok(*u0 * (-t * t / T::lit(2.0)).exp())
            }
            Potential::LinearRamp { slope, intercept } => Ok(*slope * x + *intercept),
            Potential::Tabulated(t) => t.spline().value(x),
        }
    }

    pub fn derivative(&self, x: T) -> Result<T> {
        self.check_discontinuity(x)?;
        match self {
            Potential::Constant { .. }
            | Potential::Step { .. }
            | Potential::RectangularBarrier { .. } => Ok(T::zero()),
            Potential::Eckart { u0, width } => {
                // d/dx [u0 sech²(x/w)] = -(2 u0 / w) sech²(x/w) tanh(x/w)
                let t = x / *width;
                let sech2 = {
                    let s = t.cosh().recip();
                    s * s
                };
                Ok(-(T::lit(2.0) * *u0 / *width) * sech2 * t.tanh())
            }
            Potential::Gaussian { u0, center, width } => {
                let w2 = *width * *width;
                let d = x - *center;
                Ok(-*u0 * d / w2 * (-d * d / (T::lit(2.0) * w2)).exp())
            }
            Potential::LinearRamp { slope, .. } => Ok(*slope),
            Potential::Tabulated(t) => t.spline().derivative(x),
        }
    }

    pub fn second_derivative(&self, x: T) -> Result<T> {
        self.check_discontinuity(x)?;
        match self {
            Potential::Constant { .. }
            | Potential::Step { .. }
            | Potential::RectangularBarrier { .. }
            | Potential::LinearRamp { .. } => Ok(T::zero()),
            Potential::Eckart { u0, width } => {
                // (2 u0 / w²) sech²(x/w) (2 tanh²(x/w) - sech²(x/w))
                let t = x / *width;
                let sech2 = {
                    let s = t.cosh().recip();
                    s * s
                };
                let tanh2 = t.tanh() * t.tanh();
                Ok(T::lit(2.0) * *u0 / (*width * *width)
                    * sech2
                    * (T::lit(2.0) * tanh2 - sech2))
            }
            Potential::Gaussian { u0, center, width } => {
                let w2 = *width * *width;
                let d = x - *center;
                Ok(*u0 * (d * d / (w2 * w2) - w2.recip()) * (-d * d / (T::lit(2.0) * w2)).exp())
            }
            Potential::Tabulated(t) => t.spline().second_derivative(x),
        }
    }

    fn check_discontinuity(&self, x: T) -> Result<()> {
        for d in self.discontinuities() {
            if x == d {
                return Err(Error::AtDiscontinuity { x: x.as_f64() });
            }
        }
        Ok(())
    }

    /// All roots of `U(x) = energy` in `[a, b]`, sorted ascending. Uniform
    /// 4096-cell pre-scan, each bracket refined by bisection to an absolute
    /// tolerance of `1e-12 (b - a)`.
    pub fn turning_points(&self, energy: T, a: T, b: T) -> Result<Vec<T>> {
        if !(a < b) {
            return Err(Error::invalid("turning point interval needs a < b"));
        }
        let tol = T::lit(1e-12) * (b - a);
        scan_roots(&mut |x| Ok(self.evaluate(x)? - energy), a, b, 4096, tol)
    }

    /// Maximum of U on `[a, b]`. Exact for the analytic families, dense
    /// 4096-point scan plus knot values for tabulated ones.
    pub fn max_on(&self, a: T, b: T) -> Result<T> {
        let at_ends = self.evaluate(a)?.max(self.evaluate(b)?);
        match self {
            Potential::Constant { u0 } => Ok(*u0),
            Potential::Step { .. } => Ok(at_ends),
            Potential::RectangularBarrier { u0, x_left, x_right } => {
                if *x_right >= a && *x_left <= b {
                    Ok(at_ends.max(*u0))
                } else {
                    Ok(at_ends)
                }
            }
            Potential::Eckart { u0, .. } => {
                if a <= T::zero() && b >= T::zero() && *u0 > T::zero() {
                    Ok(at_ends.max(*u0))
                } else {
                    Ok(at_ends)
                }
            }
            Potential::Gaussian { u0, center, .. } => {
                if a <= *center && b >= *center && *u0 > T::zero() {
                    Ok(at_ends.max(*u0))
                } else {
                    Ok(at_ends)
                }
            }
            Potential::LinearRamp { .. } => Ok(at_ends),
            Potential::Tabulated(t) => {
                let mut best = at_ends;
                for &(x, u) in t.knots() {
                    if x >= a && x <= b {
                        best = best.max(u);
                    }
                }
                let n = 4096;
                for i in 1..n {
                    let x = a + (b - a) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap();
                    best = best.max(self.evaluate(x)?);
                }
                Ok(best)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn catalog() -> Vec<Potential<f64>> {
        vec![
            Potential::Constant { u0: 3.0 },
            Potential::Eckart { u0: 1.0, width: 1.0 },
            Potential::Gaussian {
                u0: 1.5,
                center: 0.3,
                width: 0.8,
            },
            Potential::LinearRamp {
                slope: 2.0,
                intercept: -1.0,
            },
        ]
    }

    #[test]
    fn evaluate_known_values() {
        assert_eq!(Potential::Constant { u0: 0.0 }.evaluate(5.0).unwrap(), 0.0);
        let step = Potential::Step {
            u_left: 0.0,
            u_right: 1.0,
            x_step: 0.0,
        };
        assert_eq!(step.evaluate(-1.0).unwrap(), 0.0);
        assert_eq!(step.evaluate(1.0).unwrap(), 1.0);
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        assert_eq!(eckart.evaluate(0.0).unwrap(), 1.0);
    }

    #[test]
    fn derivative_known_values() {
        assert_eq!(Potential::Constant { u0: 3.0 }.derivative(11.3).unwrap(), 0.0);
        let ramp = Potential::LinearRamp {
            slope: 2.0,
            intercept: 0.0,
        };
        assert_eq!(ramp.derivative(7.0).unwrap(), 2.0);
        // central difference of evaluate() at step 1e-6 as the oracle
        let eckart: Potential<f64> = Potential::Eckart { u0: 1.0, width: 1.0 };
        let h = 1e-6;
        let fd = (eckart.evaluate(1.0 + h).unwrap() - eckart.evaluate(1.0 - h).unwrap()) / (2.0 * h);
        let an = eckart.derivative(1.0).unwrap();
        assert!((an - fd).abs() < 1e-9);
        assert!((an - (-0.63970)).abs() < 1e-5);
    }

    #[test]
    fn derivative_matches_central_difference_on_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let h = 1e-6;
        for pot in catalog() {
            for _ in 0..1000 {
                let x: f64 = rng.gen_range(-4.0..4.0);
                let fd = (pot.evaluate(x + h).unwrap() - pot.evaluate(x - h).unwrap()) / (2.0 * h);
                let an = pot.derivative(x).unwrap();
                assert!(
                    (an - fd).abs() <= 1e-6 * (1.0 + an.abs()),
                    "{pot:?} at x={x}: fd={fd}, analytic={an}"
                );
            }
        }
    }

    #[test]
    fn second_derivative_matches_central_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-4;
        for pot in catalog() {
            for _ in 0..200 {
                let x: f64 = rng.gen_range(-4.0..4.0);
                let fd = (pot.evaluate(x + h).unwrap() - 2.0 * pot.evaluate(x).unwrap()
                    + pot.evaluate(x - h).unwrap())
                    / (h * h);
                let an = pot.second_derivative(x).unwrap();
                assert!(
                    (an - fd).abs() <= 1e-5 * (1.0 + an.abs()),
                    "{pot:?} at x={x}: fd={fd}, analytic={an}"
                );
            }
        }
    }

    #[test]
    fn derivative_at_discontinuity_errors() {
        let step = Potential::Step {
            u_left: 0.0,
            u_right: 1.0,
            x_step: 0.25,
        };
        assert!(matches!(
            step.derivative(0.25),
            Err(Error::AtDiscontinuity { .. })
        ));
        let rect = Potential::RectangularBarrier {
            u0: 1.0,
            x_left: -1.0,
            x_right: 1.0,
        };
        assert!(rect.derivative(1.0).is_err());
        assert_eq!(rect.derivative(0.5).unwrap(), 0.0);
    }

    #[test]
    fn turning_points_examples() {
        let constant = Potential::Constant { u0: 0.0 };
        assert!(constant.turning_points(1.0, -5.0, 5.0).unwrap().is_empty());

        let ramp: Potential<f64> = Potential::LinearRamp {
            slope: 1.0,
            intercept: 0.0,
        };
        let roots = ramp.turning_points(2.0, 0.0, 10.0).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 2.0).abs() < 1e-10);

        // sech²(x_t) = 0.5 -> x_t = acosh(sqrt(2))
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        let roots = eckart.turning_points(0.5, -5.0, 5.0).unwrap();
        let x_t = 2.0f64.sqrt().acosh();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + x_t).abs() < 1e-9);
        assert!((roots[1] - x_t).abs() < 1e-9);
        for r in roots {
            let u = eckart.evaluate(r).unwrap();
            assert!((u - 0.5).abs() <= 1e-10 * 1.5);
        }
    }

    #[test]
    fn tabulated_reproduces_knots_and_derivatives() {
        let knots: Vec<(f64, f64)> = (0..201)
            .map(|i| {
                let x = -5.0 + i as f64 * 0.05;
                (x, 1.0 / (x.cosh() * x.cosh()))
            })
            .collect();
        let pot = Potential::tabulated(knots.clone()).unwrap();
        for &(x, u) in &knots {
            assert_eq!(pot.evaluate(x).unwrap(), u);
        }
        let h = 1e-6;
        for i in 0..50 {
            let x = -4.5 + i as f64 * 0.18;
            let fd = (pot.evaluate(x + h).unwrap() - pot.evaluate(x - h).unwrap()) / (2.0 * h);
            let an = pot.derivative(x).unwrap();
            assert!((an - fd).abs() <= 1e-6 * (1.0 + an.abs()));
        }
        assert!(pot.evaluate(5.5).is_err());
    }

    #[test]
    fn json_roundtrip_and_documented_keys() {
        let pot: Potential<f64> =
            serde_json::from_str(r#"{"family": "eckart", "u0": 1.0, "width": 1.0}"#).unwrap();
        assert_eq!(pot, Potential::Eckart { u0: 1.0, width: 1.0 });

        let step: Potential<f64> = serde_json::from_str(
            r#"{"family": "step", "u_left": 0.0, "u_right": 1.5, "x_step": 0.0}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&step).unwrap();
        let back: Potential<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(step, back);

        let tab: Potential<f64> = serde_json::from_str(
            r#"{"family": "tabulated", "knots": [[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]]}"#,
        )
        .unwrap();
        assert!((tab.evaluate(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(serde_json::from_str::<Potential<f64>>(
            r#"{"family": "tabulated", "knots": [[1.0, 0.0], [0.0, 1.0], [2.0, 0.5]]}"#
        )
        .is_err());
    }

    #[test]
    fn max_on_families() {
        let eckart = Potential::Eckart { u0: 1.0, width: 1.0 };
        assert_eq!(eckart.max_on(-5.0, 5.0).unwrap(), 1.0);
        assert!(eckart.max_on(2.0, 5.0).unwrap() < 0.1);
        let ramp = Potential::LinearRamp {
            slope: -1.0,
            intercept: 0.0,
        };
        assert_eq!(ramp.max_on(-2.0, 4.0).unwrap(), 2.0);
    }
}
