//! FLRW background: Friedmann closure for a(t), the particle horizon
//! integral, comoving volumes and the holographic-bound ratio.
//!
//! Units: the solver works in natural units internally (time in 1/H0, the
//! speed of light folded in at the boundary), so SI-scale inputs do not
//! produce badly scaled integrands. Conventions adopted here:
//! comoving radius chi(t) = integral of c dt/a over [t_i, t], carrying
//! length units; proper radius R_P(t) = a(t) chi(t).

mod curve;
mod horizon;
mod model;
mod ode;

pub use curve::{solve_scale_factor, GridControl, ScaleFactorCurve};
pub use horizon::{holographic_ratio, particle_horizon, HorizonResult};
pub use model::{CosmologyModel, CurvatureSign, CURVATURE_TOLERANCE};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CosmologyError {
    #[error("Hubble constant must be positive, got {0}")]
    NonPositiveHubble(f64),
    #[error("density parameter {name} must be nonnegative, got {value}")]
    NegativeDensity { name: &'static str, value: f64 },
    #[error("light speed must be positive, got {0}")]
    NonPositiveLightSpeed(f64),
    #[error("H^2 turns negative near a = {scale_factor:.6e}; recollapsing models are unsupported")]
    UnsupportedRecollapse { scale_factor: f64 },
    #[error("Friedmann radicand negative at a = {scale_factor:.6e}")]
    NegativeRadicand { scale_factor: f64 },
    #[error("step size underflow at t = {time:.6e} (h = {step:.3e})")]
    StiffnessFailure { time: f64, step: f64 },
    #[error("time {time} outside the curve range [{start}, {end}]")]
    TimeOutOfRange { time: f64, start: f64, end: f64 },
    #[error("comoving volume is not defined for closed universes here")]
    ClosedUniverseUnsupported,
}
