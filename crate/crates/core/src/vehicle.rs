//! Two-degree-of-freedom bicycle model: lateral speed and yaw rate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{
    DriverInputs, RoadInputs, SlopeMode, VehicleParams, VehicleState, MIN_FORWARD_SPEED_MPS,
};

/// Largest accepted integration step.
pub const MAX_TIME_STEP_S: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VehicleError {
    #[error("SpeedTooLow: forward speed {speed_mps} m/s is below {MIN_FORWARD_SPEED_MPS} m/s")]
    SpeedTooLow { speed_mps: f64 },
    #[error("InvalidTimeStep: dt must satisfy 0 < dt <= {MAX_TIME_STEP_S}, got {dt_s}")]
    InvalidTimeStep { dt_s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axle {
    Front,
    Rear,
}

/// Lateral tire forces summed per axle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AxleForces {
    pub front_lateral_n: f64,
    pub rear_lateral_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StateDerivative {
    pub lateral_accel_mps2: f64,
    pub yaw_accel_radps2: f64,
}

fn check_speed(inputs: &DriverInputs) -> Result<(), VehicleError> {
    // Also rejects NaN.
    if inputs.forward_speed_mps >= MIN_FORWARD_SPEED_MPS {
        Ok(())
    } else {
        Err(VehicleError::SpeedTooLow {
            speed_mps: inputs.forward_speed_mps,
        })
    }
}

/// Equations of motion on a banked (lateral mode) or graded (longitudinal
/// mode) road. Only the bank contributes a gravity term.
pub fn dynamics(
    state: &VehicleState,
    inputs: &DriverInputs,
    road: &RoadInputs<'_>,
    forces: &AxleForces,
    vp: &VehicleParams,
) -> Result<StateDerivative, VehicleError> {
    check_speed(inputs)?;
    let total = forces.front_lateral_n + forces.rear_lateral_n;
    let gravity = match road.slope_mode {
        SlopeMode::Lateral => vp.mass_kg * vp.gravity_mps2 * road.lateral_slope_rad.sin(),
        SlopeMode::Longitudinal => 0.0,
    };
    Ok(StateDerivative {
        lateral_accel_mps2: (total - gravity) / vp.mass_kg
            - inputs.forward_speed_mps * state.yaw_rate_radps,
        yaw_accel_radps2: (vp.dist_cg_front_m * forces.front_lateral_n
            - vp.dist_cg_rear_m * forces.rear_lateral_n)
            / vp.yaw_inertia_kgm2,
    })
}

fn advance(state: &VehicleState, d: &StateDerivative, h: f64) -> VehicleState {
    VehicleState {
        lateral_speed_mps: state.lateral_speed_mps + h * d.lateral_accel_mps2,
        yaw_rate_radps: state.yaw_rate_radps + h * d.yaw_accel_radps2,
    }
}

/// One classical Runge–Kutta step of an arbitrary state derivative.
pub fn rk4_step<E, F>(state: &VehicleState, dt_s: f64, mut derivative: F) -> Result<VehicleState, E>
where
    F: FnMut(&VehicleState) -> Result<StateDerivative, E>,
{
    let k1 = derivative(state)?;
    let k2 = derivative(&advance(state, &k1, 0.5 * dt_s))?;
    let k3 = derivative(&advance(state, &k2, 0.5 * dt_s))?;
    let k4 = derivative(&advance(state, &k3, dt_s))?;
    let combine =
        |f: fn(&StateDerivative) -> f64| (f(&k1) + 2.0 * f(&k2) + 2.0 * f(&k3) + f(&k4)) / 6.0;
    let mean = StateDerivative {
        lateral_accel_mps2: combine(|d| d.lateral_accel_mps2),
        yaw_accel_radps2: combine(|d| d.yaw_accel_radps2),
    };
    Ok(advance(state, &mean, dt_s))
}

/// Advances the state by `dt_s` with inputs and tire forces held constant.
pub fn step(
    state: &VehicleState,
    inputs: &DriverInputs,
    road: &RoadInputs<'_>,
    forces: &AxleForces,
    vp: &VehicleParams,
    dt_s: f64,
) -> Result<VehicleState, VehicleError> {
    if !(dt_s > 0.0 && dt_s <= MAX_TIME_STEP_S) {
        return Err(VehicleError::InvalidTimeStep { dt_s });
    }
    rk4_step(state, dt_s, |s| dynamics(s, inputs, road, forces, vp))
}

/// Axle slip angle. Front: `atan((v + l_f·r)/u) − δ`; rear: `atan((v − l_r·r)/u)`.
pub fn slip_angle(
    state: &VehicleState,
    inputs: &DriverInputs,
    vp: &VehicleParams,
    axle: Axle,
) -> Result<f64, VehicleError> {
    check_speed(inputs)?;
    let u = inputs.forward_speed_mps;
    let v = state.lateral_speed_mps;
    let r = state.yaw_rate_radps;
    Ok(match axle {
        Axle::Front => ((v + vp.dist_cg_front_m * r) / u).atan() - inputs.steering_angle_rad,
        Axle::Rear => ((v - vp.dist_cg_rear_m * r) / u).atan(),
    })
}
