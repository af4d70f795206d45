//! Tire chain: normal load, rigid-ring radial and contact forces, Magic-Formula
//! lateral force and aligning moment, and the rack force.
//!
//! Sign convention: a positive slip angle produces a negative lateral force
//! (the shipped `D_y` table is negative), the pneumatic trail is positive near
//! zero slip, so the aligning moment `−t·F_y` has the sign of the slip angle.
//! With a positive moment-to-rack ratio the rack force then opposes the steer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{TireLoads, TireParams, VehicleParams, MAX_SLOPE_RAD};
use crate::road::EffectiveRoadPoint;
use crate::vehicle::Axle;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TireError {
    #[error("SlopeOutOfRange: |slope| must be < pi/4, got {slope_rad}")]
    SlopeOutOfRange { slope_rad: f64 },
    #[error("SlipOutOfRange: |slip angle| must be < pi/2, got {slip_rad}")]
    SlipOutOfRange { slip_rad: f64 },
}

/// Vertical, radial and contact-patch loads of one tire.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TireLoadState {
    pub normal_force_n: f64,
    pub static_deflection_m: f64,
    pub radial_deflection_m: f64,
    pub radial_force_n: f64,
    pub non_lagging_force_n: f64,
    pub contact_patch_normal_n: f64,
}

impl TireLoadState {
    pub fn loads(&self) -> TireLoads {
        TireLoads {
            normal_n: self.normal_force_n,
            radial_n: self.radial_force_n,
            contact_patch_normal_n: self.contact_patch_normal_n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TireOutput {
    pub lateral_force_n: f64,
    pub pneumatic_trail_m: f64,
    pub aligning_moment_nm: f64,
}

/// Shifted slip quantities `α_y`, `α_t`, `α_r`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SlipTerms {
    pub lateral: f64,
    pub trail: f64,
    pub residual: f64,
}

fn check_slope(slope_rad: f64) -> Result<(), TireError> {
    if slope_rad.abs() < MAX_SLOPE_RAD {
        Ok(())
    } else {
        Err(TireError::SlopeOutOfRange { slope_rad })
    }
}

/// Per-tire normal force from the vertical balance on a slope.
pub fn normal_force(vp: &VehicleParams, slope_rad: f64, axle: Axle) -> Result<f64, TireError> {
    check_slope(slope_rad)?;
    let arm = match axle {
        Axle::Front => vp.dist_cg_rear_m,
        Axle::Rear => vp.dist_cg_front_m,
    };
    Ok(vp.mass_kg * vp.gravity_mps2 * arm * slope_rad.cos() / (2.0 * vp.wheelbase_m()))
}

/// Flat-road vertical deflection `z_a = F_z / C_z`.
pub fn static_deflection(
    vp: &VehicleParams,
    tp: &TireParams,
    slope_rad: f64,
    axle: Axle,
) -> Result<f64, TireError> {
    Ok(normal_force(vp, slope_rad, axle)? / tp.vertical_stiffness_npm)
}

pub fn radial_deflection(effective_height_m: f64, static_deflection_m: f64, beta_y: f64) -> f64 {
    (effective_height_m - static_deflection_m) * beta_y.cos()
}

/// Radial force; negative values mean the tire has left the ground and clamp to 0.
pub fn radial_force(tp: &TireParams, radial_deflection_m: f64, beta_x: f64) -> f64 {
    let rho = radial_deflection_m;
    let f = tp.q_fz1 * (1.0 + tp.q_fz3 * beta_x * beta_x) * rho + tp.q_fz2 * rho * rho;
    f.max(0.0)
}

/// Side force from loading the tire against a laterally inclined contact.
pub fn non_lagging_force(
    tp: &TireParams,
    beta_x: f64,
    radial_force_n: f64,
    normal_force_n: f64,
) -> f64 {
    let loads = TireLoads {
        normal_n: normal_force_n,
        radial_n: radial_force_n,
        contact_patch_normal_n: 0.0,
    };
    let c = &tp.non_lagging;
    let (b_n, c_n, d_n) = (c.b_n.eval(&loads), c.c_n.eval(&loads), c.d_n.eval(&loads));
    d_n * (c_n * (b_n * beta_x).atan()).sin() * beta_x.cos() - radial_force_n * beta_x.sin()
}

pub fn contact_patch_normal(radial_force_n: f64, non_lagging_force_n: f64, beta_x: f64) -> f64 {
    ((radial_force_n + non_lagging_force_n * beta_x.sin()) / beta_x.cos()).max(0.0)
}

/// `C·atan(B·x − E·(B·x − atan(B·x)))`
fn magic_angle(b: f64, c: f64, e: f64, x: f64) -> f64 {
    let bx = b * x;
    c * (bx - e * (bx - bx.atan())).atan()
}

/// Magic-Formula lateral force and the slip terms shared with the moment.
pub fn lateral_force(
    tp: &TireParams,
    slip_rad: f64,
    loads: &TireLoads,
) -> Result<(f64, SlipTerms), TireError> {
    if !(slip_rad.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(TireError::SlipOutOfRange { slip_rad });
    }
    let lat = &tp.lateral;
    let tan = slip_rad.tan();
    let slips = SlipTerms {
        lateral: lat.s_hy.eval(loads) + tan,
        trail: tp.trail.s_ht.eval(loads) + tan,
        residual: tan,
    };
    let angle = magic_angle(
        lat.b_y.eval(loads),
        lat.c_y.eval(loads),
        lat.e_y.eval(loads),
        slips.lateral,
    );
    let force = lat.d_y.eval(loads) * angle.sin() + lat.s_vy.eval(loads);
    Ok((force, slips))
}

/// Returns `(M_z, t)`.
pub fn aligning_moment(
    tp: &TireParams,
    lateral_force_n: f64,
    slips: &SlipTerms,
    loads: &TireLoads,
) -> (f64, f64) {
    let tr = &tp.trail;
    let trail = tr.d_t.eval(loads)
        * magic_angle(
            tr.b_t.eval(loads),
            tr.c_t.eval(loads),
            tr.e_t.eval(loads),
            slips.trail,
        )
        .cos();
    let res = &tp.residual;
    let residual = res.d_r.eval(loads) * (res.b_r.eval(loads) * slips.residual).atan().cos();
    (-trail * lateral_force_n + residual, trail)
}

/// Rack force from the two front aligning moments.
pub fn rack_force(vp: &VehicleParams, left_moment_nm: f64, right_moment_nm: f64) -> f64 {
    vp.moment_to_rack_ratio_per_m * (left_moment_nm + right_moment_nm)
}

/// Load chain for a tire on an effective road point: normal force through
/// contact-patch normal force.
pub fn load_state(
    vp: &VehicleParams,
    tp: &TireParams,
    slope_rad: f64,
    axle: Axle,
    road: &EffectiveRoadPoint,
) -> Result<TireLoadState, TireError> {
    let normal = normal_force(vp, slope_rad, axle)?;
    let z_a = normal / tp.vertical_stiffness_npm;
    let beta_x = road.effective_lateral_slope_rad;
    let rho = radial_deflection(
        road.effective_height_m,
        z_a,
        road.effective_longitudinal_slope_rad,
    );
    let radial = radial_force(tp, rho, beta_x);
    let side = non_lagging_force(tp, beta_x, radial, normal);
    Ok(TireLoadState {
        normal_force_n: normal,
        static_deflection_m: z_a,
        radial_deflection_m: rho,
        radial_force_n: radial,
        non_lagging_force_n: side,
        contact_patch_normal_n: contact_patch_normal(radial, side, beta_x),
    })
}

/// Lateral force, trail and aligning moment of a loaded tire at a slip angle.
pub fn tire_output(
    tp: &TireParams,
    slip_rad: f64,
    load: &TireLoadState,
) -> Result<TireOutput, TireError> {
    let loads = load.loads();
    let (force, slips) = lateral_force(tp, slip_rad, &loads)?;
    let (moment, trail) = aligning_moment(tp, force, &slips, &loads);
    Ok(TireOutput {
        lateral_force_n: force,
        pneumatic_trail_m: trail,
        aligning_moment_nm: moment,
    })
}

/// Rear axle lateral force from the linear cornering stiffness of both tires.
pub fn rear_axle_force(tp: &TireParams, rear_slip_rad: f64) -> f64 {
    -2.0 * tp.rear_cornering_stiffness_npr * rear_slip_rad
}
