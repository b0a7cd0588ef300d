//! Numerical kernels: quadrature, ODE stepping, root bracketing, splines,
//! finite differences and small dense solves.

pub mod fd;
pub mod fit;
pub mod linsolve;
pub mod ode;
pub mod oscillatory;
pub mod quad;
pub mod rootfind;
pub mod spline;
