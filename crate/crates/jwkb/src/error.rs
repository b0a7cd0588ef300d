use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Crate-wide error type. Positions and magnitudes are reported as `f64`
/// regardless of the scalar the computation ran in.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("position {x} is outside the potential domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("derivative requested at a potential discontinuity (x = {x})")]
    AtDiscontinuity { x: f64 },

    #[error("classical momentum vanishes at x = {x} (turning point)")]
    TurningPoint { x: f64 },

    #[error("grid enters the excluded neighbourhood (radius {exclusion}) of the turning point at x = {x}")]
    TurningPointTooClose { x: f64, exclusion: f64 },

    #[error("quadrature did not reach the requested accuracy: requested {requested:e}, achieved {achieved:e}")]
    QuadratureAccuracy { requested: f64, achieved: f64 },

    #[error("ODE step size underflow near x = {x}")]
    OdeSingular { x: f64 },

    #[error("fields are defined on different grids")]
    GridMismatch,

    #[error("grid too coarse: need at least {needed} points, got {got}")]
    GridTooCoarse { needed: usize, got: usize },

    #[error("grid is not strictly increasing")]
    GridNotIncreasing,

    #[error("operation requires a uniform grid")]
    NonUniformGrid,

    #[error("operation requires an improved-method sample, got {got}")]
    MethodMismatch { got: &'static str },

    #[error("energy {energy} is not above the potential maximum {u_max} on the domain")]
    NotAboveBarrier { energy: f64, u_max: f64 },

    #[error("energy {energy} does not propagate on an asymptotic side (potential {u_side})")]
    EvanescentSide { energy: f64, u_side: f64 },

    #[error("potential is not constant near the domain end x = {x}")]
    AsymptoteNotConstant { x: f64 },

    #[error("grid refinement stalled before the requested accuracy (last change {last_change:e})")]
    ResolutionNotConverged { last_change: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
