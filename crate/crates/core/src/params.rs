//! Shared domain types and parameter validation.
//!
//! All quantities are SI: metres, kilograms, seconds, newtons, radians.
//! Parameter sets are plain values; once [`validate_params`] accepts them they
//! are wrapped in [`ValidatedParams`] and never mutated again.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::road::CleatSpec;

/// Below this forward speed the slip-angle expression is ill conditioned.
pub const MIN_FORWARD_SPEED_MPS: f64 = 0.5;

/// Slopes at or beyond this magnitude are rejected.
pub const MAX_SLOPE_RAD: f64 = std::f64::consts::FRAC_PI_4;

/// Magic-Formula shape factors must stay inside this open interval.
pub const SHAPE_FACTOR_RANGE: (f64, f64) = (0.0, 3.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("NonPositiveMass: mass_kg must be > 0, got {value}")]
    NonPositiveMass { value: f64 },
    #[error("NonPositive: {field} must be > 0, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("ZeroRackRatio: moment_to_rack_ratio_per_m must be nonzero and finite, got {value}")]
    ZeroRackRatio { value: f64 },
    #[error("GravityOutOfRange: gravity_mps2 must lie in [9.0, 10.0], got {value}")]
    GravityOutOfRange { value: f64 },
    #[error("NonPositiveStiffness: {field} must be > 0, got {value}")]
    NonPositiveStiffness { field: &'static str, value: f64 },
    #[error("NegativeRadialCoefficient: q_fz1 must be >= 0, got {value}")]
    NegativeRadialCoefficient { value: f64 },
    #[error("NonFinite: {field} is not finite")]
    NonFinite { field: &'static str },
    #[error(
        "CoefficientRangeError: {factor} must stay within ({lower}, {upper}) over the load range, \
         evaluates to [{min}, {max}]"
    )]
    CoefficientRangeError {
        factor: &'static str,
        lower: f64,
        upper: f64,
        min: f64,
        max: f64,
    },
    #[error("InvalidLoadVariable: {factor} cannot depend on {load:?}")]
    InvalidLoadVariable {
        factor: &'static str,
        load: LoadVariable,
    },
    #[error("InvalidCamGeometry: {field} must be > 0 and finite, got {value}")]
    InvalidCamGeometry { field: &'static str, value: f64 },
}

/// Rigid-body and steering-linkage parameters of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleParams {
    pub mass_kg: f64,
    pub yaw_inertia_kgm2: f64,
    /// Centre of gravity to front axle.
    pub dist_cg_front_m: f64,
    /// Centre of gravity to rear axle.
    pub dist_cg_rear_m: f64,
    /// Tire aligning moment to rack force transmission ratio.
    pub moment_to_rack_ratio_per_m: f64,
    pub gravity_mps2: f64,
    /// Lateral distance from the vehicle centreline to each front tire centre.
    pub half_track_m: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass_kg: 1800.0,
            yaw_inertia_kgm2: 3000.0,
            dist_cg_front_m: 1.4,
            dist_cg_rear_m: 1.6,
            moment_to_rack_ratio_per_m: 7.0,
            gravity_mps2: 9.81,
            half_track_m: 0.82,
        }
    }
}

impl VehicleParams {
    pub fn wheelbase_m(&self) -> f64 {
        self.dist_cg_front_m + self.dist_cg_rear_m
    }

    /// Static load carried by the heavier axle on a level road.
    pub fn max_static_axle_load_n(&self) -> f64 {
        let heavier = self.dist_cg_front_m.max(self.dist_cg_rear_m);
        self.mass_kg * self.gravity_mps2 * heavier / self.wheelbase_m()
    }
}

/// The load a coefficient polynomial is evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadVariable {
    /// Vertical-balance normal force `F_z`.
    #[default]
    Normal,
    /// Radial force `F_z^rad` from the obstacle deflection.
    Radial,
    /// Contact-patch normal force `F_cN`.
    ContactPatchNormal,
    /// `F_z + F_cN`: static load plus obstacle-induced contact load.
    TotalContact,
    /// `F_z + F_z^rad`.
    TotalRadial,
}

/// Loads available when evaluating tire coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TireLoads {
    pub normal_n: f64,
    pub radial_n: f64,
    pub contact_patch_normal_n: f64,
}

impl TireLoads {
    pub fn get(&self, load: LoadVariable) -> f64 {
        match load {
            LoadVariable::Normal => self.normal_n,
            LoadVariable::Radial => self.radial_n,
            LoadVariable::ContactPatchNormal => self.contact_patch_normal_n,
            LoadVariable::TotalContact => self.normal_n + self.contact_patch_normal_n,
            LoadVariable::TotalRadial => self.normal_n + self.radial_n,
        }
    }
}

/// Quadratic in one named load: `c0 + c1·F + c2·F²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadPoly {
    #[serde(default)]
    pub load: LoadVariable,
    pub coeffs: [f64; 3],
}

impl LoadPoly {
    pub const fn constant(value: f64) -> Self {
        Self {
            load: LoadVariable::Normal,
            coeffs: [value, 0.0, 0.0],
        }
    }

    pub const fn new(load: LoadVariable, coeffs: [f64; 3]) -> Self {
        Self { load, coeffs }
    }

    pub fn eval_at(&self, load_n: f64) -> f64 {
        let [c0, c1, c2] = self.coeffs;
        c0 + load_n * (c1 + load_n * c2)
    }

    pub fn eval(&self, loads: &TireLoads) -> f64 {
        self.eval_at(loads.get(self.load))
    }

    /// Exact `(min, max)` of the polynomial over `[lo, hi]`.
    pub fn range_over(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut candidates = vec![self.eval_at(lo), self.eval_at(hi)];
        let [_, c1, c2] = self.coeffs;
        if c2 != 0.0 {
            let vertex = -c1 / (2.0 * c2);
            if vertex > lo && vertex < hi {
                candidates.push(self.eval_at(vertex));
            }
        }
        candidates
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), &v| {
                (mn.min(v), mx.max(v))
            })
    }
}

/// Lateral force factors `B_y, C_y, D_y, E_y, S_Hy, S_Vy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LateralCoefficients {
    pub b_y: LoadPoly,
    pub c_y: LoadPoly,
    pub d_y: LoadPoly,
    pub e_y: LoadPoly,
    pub s_hy: LoadPoly,
    pub s_vy: LoadPoly,
}

impl Default for LateralCoefficients {
    fn default() -> Self {
        Self {
            b_y: LoadPoly::constant(10.0),
            c_y: LoadPoly::constant(1.3),
            // Negative peak so that positive slip gives negative side force.
            d_y: LoadPoly::new(LoadVariable::TotalContact, [0.0, -1.0, 1.0e-5]),
            e_y: LoadPoly::constant(-1.0),
            s_hy: LoadPoly::constant(0.0),
            s_vy: LoadPoly::constant(0.0),
        }
    }
}

/// Pneumatic trail factors `B_t, C_t, D_t, E_t, S_Ht`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrailCoefficients {
    pub b_t: LoadPoly,
    pub c_t: LoadPoly,
    pub d_t: LoadPoly,
    pub e_t: LoadPoly,
    pub s_ht: LoadPoly,
}

impl Default for TrailCoefficients {
    fn default() -> Self {
        Self {
            b_t: LoadPoly::constant(10.0),
            c_t: LoadPoly::constant(1.2),
            d_t: LoadPoly::new(LoadVariable::TotalContact, [0.025, 1.0e-6, 0.0]),
            e_t: LoadPoly::constant(-0.5),
            s_ht: LoadPoly::constant(0.0),
        }
    }
}

/// Residual moment factors `B_r, D_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResidualCoefficients {
    pub b_r: LoadPoly,
    pub d_r: LoadPoly,
}

impl Default for ResidualCoefficients {
    fn default() -> Self {
        Self {
            b_r: LoadPoly::constant(10.0),
            // Zero at zero camber and conicity: straight driving on a flat road
            // must give zero rack force.
            d_r: LoadPoly::constant(0.0),
        }
    }
}

/// Non-lagging side force factors `B_N, C_N, D_N`. These may depend on the
/// normal and radial forces only; the contact-patch force is computed later.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonLaggingCoefficients {
    pub b_n: LoadPoly,
    pub c_n: LoadPoly,
    pub d_n: LoadPoly,
}

impl Default for NonLaggingCoefficients {
    fn default() -> Self {
        Self {
            b_n: LoadPoly::constant(8.0),
            c_n: LoadPoly::constant(1.2),
            d_n: LoadPoly::new(LoadVariable::TotalRadial, [0.0, 0.1, 0.0]),
        }
    }
}

/// Tandem elliptical-cam geometry used to envelope short obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CamGeometry {
    pub half_length_m: f64,
    pub half_height_m: f64,
    /// Longitudinal distance between the two cam centres.
    pub spacing_m: f64,
    /// Lateral offset of each of the two tracks from the tire centre.
    pub track_half_width_m: f64,
    /// Superellipse exponent of the cam lower boundary (2 is an ellipse).
    pub exponent: f64,
}

impl Default for CamGeometry {
    fn default() -> Self {
        Self {
            half_length_m: 0.30,
            half_height_m: 0.25,
            spacing_m: 0.10,
            track_half_width_m: 0.05,
            exponent: 2.0,
        }
    }
}

impl CamGeometry {
    pub fn validate(&self) -> Result<(), ParamError> {
        let fields = [
            ("half_length_m", self.half_length_m),
            ("half_height_m", self.half_height_m),
            ("spacing_m", self.spacing_m),
            ("track_half_width_m", self.track_half_width_m),
            ("exponent", self.exponent),
        ];
        for (field, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(ParamError::InvalidCamGeometry { field, value });
            }
        }
        Ok(())
    }
}

/// Tire parameters: vertical/radial stiffness, Magic-Formula tables and the
/// enveloping cam. Shipping defaults describe a generic passenger-car tire and
/// are placeholders, not measured data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TireParams {
    pub vertical_stiffness_npm: f64,
    pub q_fz1: f64,
    pub q_fz2: f64,
    pub q_fz3: f64,
    /// Upper bound on the pneumatic trail magnitude.
    pub contact_half_length_m: f64,
    /// Linear cornering stiffness of one rear tire.
    pub rear_cornering_stiffness_npr: f64,
    pub lateral: LateralCoefficients,
    pub trail: TrailCoefficients,
    pub residual: ResidualCoefficients,
    pub non_lagging: NonLaggingCoefficients,
    pub cam: CamGeometry,
}

impl Default for TireParams {
    fn default() -> Self {
        Self {
            vertical_stiffness_npm: 200_000.0,
            q_fz1: 200_000.0,
            q_fz2: 1.0e6,
            q_fz3: 0.5,
            contact_half_length_m: 0.08,
            rear_cornering_stiffness_npr: 70_000.0,
            lateral: LateralCoefficients::default(),
            trail: TrailCoefficients::default(),
            residual: ResidualCoefficients::default(),
            non_lagging: NonLaggingCoefficients::default(),
            cam: CamGeometry::default(),
        }
    }
}

impl TireParams {
    /// Every coefficient table with a stable name, in validation order.
    pub fn coefficient_tables(&self) -> [(&'static str, LoadPoly); 16] {
        let l = &self.lateral;
        let t = &self.trail;
        let r = &self.residual;
        let n = &self.non_lagging;
        [
            ("B_y", l.b_y),
            ("C_y", l.c_y),
            ("D_y", l.d_y),
            ("E_y", l.e_y),
            ("S_Hy", l.s_hy),
            ("S_Vy", l.s_vy),
            ("B_t", t.b_t),
            ("C_t", t.c_t),
            ("D_t", t.d_t),
            ("E_t", t.e_t),
            ("S_Ht", t.s_ht),
            ("B_r", r.b_r),
            ("D_r", r.d_r),
            ("B_N", n.b_n),
            ("C_N", n.c_n),
            ("D_N", n.d_n),
        ]
    }
}

/// Integrated vehicle states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub lateral_speed_mps: f64,
    pub yaw_rate_radps: f64,
}

impl VehicleState {
    pub fn new(lateral_speed_mps: f64, yaw_rate_radps: f64) -> Self {
        Self {
            lateral_speed_mps,
            yaw_rate_radps,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lateral_speed_mps.is_finite() && self.yaw_rate_radps.is_finite()
    }

    /// False when the lateral speed is no longer small relative to `u`.
    pub fn within_small_angle_regime(&self, forward_speed_mps: f64) -> bool {
        self.lateral_speed_mps.abs() < forward_speed_mps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriverInputs {
    /// Road-wheel steering angle.
    pub steering_angle_rad: f64,
    pub forward_speed_mps: f64,
}

impl DriverInputs {
    pub fn new(steering_angle_rad: f64, forward_speed_mps: f64) -> Self {
        Self {
            steering_angle_rad,
            forward_speed_mps,
        }
    }
}

/// Which slope the vehicle model treats as active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeMode {
    /// Bank: gravity enters the lateral balance.
    #[default]
    Lateral,
    /// Grade: lateral balance has no gravity term.
    Longitudinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoadInputs<'a> {
    pub lateral_slope_rad: f64,
    pub longitudinal_slope_rad: f64,
    pub cleats: &'a [CleatSpec],
    pub slope_mode: SlopeMode,
}

impl<'a> RoadInputs<'a> {
    pub fn flat() -> RoadInputs<'static> {
        RoadInputs {
            lateral_slope_rad: 0.0,
            longitudinal_slope_rad: 0.0,
            cleats: &[],
            slope_mode: SlopeMode::Lateral,
        }
    }

    pub fn lateral(slope_rad: f64, cleats: &'a [CleatSpec]) -> Self {
        Self {
            lateral_slope_rad: slope_rad,
            longitudinal_slope_rad: 0.0,
            cleats,
            slope_mode: SlopeMode::Lateral,
        }
    }

    /// Slope seen by the vertical force balance in the active mode.
    pub fn active_slope_rad(&self) -> f64 {
        match self.slope_mode {
            SlopeMode::Lateral => self.lateral_slope_rad,
            SlopeMode::Longitudinal => self.longitudinal_slope_rad,
        }
    }

    pub fn slopes_in_range(&self) -> bool {
        self.lateral_slope_rad.abs() < MAX_SLOPE_RAD
            && self.longitudinal_slope_rad.abs() < MAX_SLOPE_RAD
    }
}

/// Parameters that passed [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams {
    vehicle: VehicleParams,
    tire: TireParams,
}

impl ValidatedParams {
    pub fn vehicle(&self) -> &VehicleParams {
        &self.vehicle
    }

    pub fn tire(&self) -> &TireParams {
        &self.tire
    }

    pub fn into_parts(self) -> (VehicleParams, TireParams) {
        (self.vehicle, self.tire)
    }
}

fn positive(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NonPositive { field, value })
    }
}

fn check_range(
    factor: &'static str,
    poly: &LoadPoly,
    load_hi: f64,
    lower: f64,
    upper: f64,
) -> Result<(), ParamError> {
    let (min, max) = poly.range_over(0.0, load_hi);
    if min > lower && max < upper {
        Ok(())
    } else {
        Err(ParamError::CoefficientRangeError {
            factor,
            lower,
            upper,
            min,
            max,
        })
    }
}

/// Checks every parameter invariant, returning the first violation.
pub fn validate_params(vp: VehicleParams, tp: TireParams) -> Result<ValidatedParams, ParamError> {
    if !(vp.mass_kg.is_finite() && vp.mass_kg > 0.0) {
        return Err(ParamError::NonPositiveMass { value: vp.mass_kg });
    }
    positive("yaw_inertia_kgm2", vp.yaw_inertia_kgm2)?;
    positive("dist_cg_front_m", vp.dist_cg_front_m)?;
    positive("dist_cg_rear_m", vp.dist_cg_rear_m)?;
    positive("half_track_m", vp.half_track_m)?;
    let ratio = vp.moment_to_rack_ratio_per_m;
    if !(ratio.is_finite() && ratio != 0.0) {
        return Err(ParamError::ZeroRackRatio { value: ratio });
    }
    if !(9.0..=10.0).contains(&vp.gravity_mps2) {
        return Err(ParamError::GravityOutOfRange {
            value: vp.gravity_mps2,
        });
    }

    for (field, value) in [
        ("vertical_stiffness_npm", tp.vertical_stiffness_npm),
        (
            "rear_cornering_stiffness_npr",
            tp.rear_cornering_stiffness_npr,
        ),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(ParamError::NonPositiveStiffness { field, value });
        }
    }
    if !(tp.q_fz1.is_finite() && tp.q_fz1 >= 0.0) {
        return Err(ParamError::NegativeRadialCoefficient { value: tp.q_fz1 });
    }
    for (field, value) in [("q_fz2", tp.q_fz2), ("q_fz3", tp.q_fz3)] {
        if !value.is_finite() {
            return Err(ParamError::NonFinite { field });
        }
    }
    positive("contact_half_length_m", tp.contact_half_length_m)?;
    tp.cam.validate()?;

    let load_hi = 2.0 * vp.max_static_axle_load_n();
    for (factor, poly) in tp.coefficient_tables() {
        if poly.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(ParamError::NonFinite { field: factor });
        }
        let (min, max) = poly.range_over(0.0, load_hi);
        if !(min.is_finite() && max.is_finite()) {
            return Err(ParamError::NonFinite { field: factor });
        }
    }
    for (factor, poly) in [
        ("B_N", tp.non_lagging.b_n),
        ("C_N", tp.non_lagging.c_n),
        ("D_N", tp.non_lagging.d_n),
    ] {
        if matches!(
            poly.load,
            LoadVariable::ContactPatchNormal | LoadVariable::TotalContact
        ) {
            return Err(ParamError::InvalidLoadVariable {
                factor,
                load: poly.load,
            });
        }
    }
    let (lo, hi) = SHAPE_FACTOR_RANGE;
    check_range("C_y", &tp.lateral.c_y, load_hi, lo, hi)?;
    check_range("C_t", &tp.trail.c_t, load_hi, lo, hi)?;
    let half = tp.contact_half_length_m;
    // Trail magnitude never exceeds |D_t|; bounding D_t bounds the trail.
    let d_t = tp.trail.d_t;
    let (min, max) = d_t.range_over(0.0, load_hi);
    if min < -half || max > half {
        return Err(ParamError::CoefficientRangeError {
            factor: "D_t",
            lower: -half,
            upper: half,
            min,
            max,
        });
    }

    Ok(ValidatedParams {
        vehicle: vp,
        tire: tp,
    })
}
