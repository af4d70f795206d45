//! Steering rack force estimation on uneven roads.
//!
//! The estimator couples a two-degree-of-freedom bicycle model with a
//! rigid-ring tire chain. Road cleats and potholes are turned into an
//! effective road profile (height, lateral and longitudinal slope) by a
//! tandem-cam enveloping scheme; road banks and grades enter directly. Front
//! tire aligning moments are mapped to the rack force through a constant
//! transmission ratio.
//!
//! Modules:
//! - [params]: parameter sets, shared state types, validation
//! - [road]: cleat geometry and the effective road profile
//! - [vehicle]: bicycle-model dynamics, RK4 stepping, slip angles
//! - [tire]: normal/radial/contact loads, Magic-Formula force and moment, rack force
//! - [estimator]: the per-sample loop, model variants and error metrics
//!
//! Units are SI throughout.

// `!(x > y)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod estimator;
pub mod params;
pub mod road;
pub mod symbols;
pub mod tire;
pub mod vehicle;

pub use estimator::{
    mean_absolute_error, rack_force_trace, score, simulate, EstimateSample, EstimatorError,
    LogSample, ModelVariant, RoadSetup, ScoreSummary,
};
pub use params::{
    validate_params, DriverInputs, ParamError, RoadInputs, SlopeMode, TireParams, ValidatedParams,
    VehicleParams, VehicleState,
};
pub use road::{CleatSpec, EffectiveRoadPoint};
