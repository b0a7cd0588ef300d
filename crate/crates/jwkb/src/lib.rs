//! Semiclassical toolkit for one-dimensional quantum scattering.
//!
//! Implements the standard JWKB approximation and the linearized-Riccati
//! "improved" JWKB approximation, together with exact reference solvers
//! (Numerov integration, analytic piecewise-constant matching) and a
//! diagnostics suite that verifies the analytic identities the methods
//! rest on: integration-constant fixing, step-potential equivalence, the
//! JWKB error-function identity chain, probability-current violation and
//! boundedness of the correction at turning points.
//!
//! Everything is generic over the real scalar via [`num::Real`]
//! (`f32` or `f64`); concrete `f64` aliases live at the crate root.

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod num;
pub mod numeric;
pub mod oracle;
pub mod potentials;
pub mod corrections;
pub mod scattering;
pub mod semiclassics;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use field::{linspace, ComplexField, RealField};
pub use num::Real;
pub use potentials::Potential;
pub use semiclassics::PhysicalParams;

/// Complex number over `f64`.
pub type C64 = num_complex::Complex<f64>;
/// Complex number over `f32`.
pub type C32 = num_complex::Complex<f32>;
/// Potential catalog over `f64`.
pub type Potential64 = Potential<f64>;
/// Physical parameters over `f64`.
pub type PhysicalParams64 = PhysicalParams<f64>;
/// Complex field over `f64`.
pub type ComplexField64 = ComplexField<f64>;
