//! Coverage-aware uplink resource block allocation for camera networks.
//!
//! Rates are generic over [`scalar::Rate`]; the aliases below fix the common
//! choices.

pub mod error;
pub mod harness;
pub mod model;
pub mod scalar;
pub mod scenario;
pub mod solvers;

pub use error::{Error, Result};

/// Rates as `f64`, the channel model's native type.
pub type Scenario64 = model::Scenario<f64>;
pub type Scenario32 = model::Scenario<f32>;
/// Integer rates, handy for hand-built instances.
pub type IntScenario = model::Scenario<u32>;
/// Exact rational rates.
pub type RationalScenario = model::Scenario<num_rational::Rational64>;

pub type Schedule64 = model::Schedule<f64>;
pub type SolverResult64 = solvers::SolverResult<f64>;
pub type CameraNode64 = model::CameraNode<f64>;
