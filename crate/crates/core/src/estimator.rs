//! Estimator loop: road enveloping, slip angles, tire chain and rack force at
//! each log sample, then one integration step of the vehicle model.
//!
//! Tire forces are evaluated once per sample from the state at the start of
//! the step and held constant over that step. The vehicle is assumed to follow
//! the track centreline; its arclength is the integral of forward speed, with
//! the centre of gravity at `s = 0` on the first sample.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{
    DriverInputs, RoadInputs, SlopeMode, ValidatedParams, VehicleState, MIN_FORWARD_SPEED_MPS,
};
use crate::road::{effective_profile, CleatSpec, EffectiveRoadPoint, RoadError};
use crate::tire::{
    load_state, rack_force, rear_axle_force, tire_output, TireError, TireLoadState, TireOutput,
};
use crate::vehicle::{self, slip_angle, Axle, AxleForces, VehicleError};

/// Relative tolerance on sample spacing.
pub const UNIFORM_SPACING_TOL_S: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelVariant {
    /// Rigid-ring tire chain driven by the enveloped road profile.
    #[serde(rename = "RR")]
    RigidRing,
    /// Same vehicle and tire model with every road input zeroed.
    #[serde(rename = "2DOF-FR")]
    FlatRoad2Dof,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 2] = [ModelVariant::RigidRing, ModelVariant::FlatRoad2Dof];

    /// Display label, as used in metric tables.
    pub fn label(self) -> &'static str {
        match self {
            ModelVariant::RigidRing => "RR",
            ModelVariant::FlatRoad2Dof => "2DOF-FR",
        }
    }

    /// Short identifier used on the command line and in file names.
    pub fn key(self) -> &'static str {
        match self {
            ModelVariant::RigidRing => "rr",
            ModelVariant::FlatRoad2Dof => "fr",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rr" => Ok(ModelVariant::RigidRing),
            "fr" | "2dof-fr" => Ok(ModelVariant::FlatRoad2Dof),
            other => Err(format!(
                "unknown model variant '{other}' (expected rr or fr)"
            )),
        }
    }
}

/// One row of a uniformly sampled driving log.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LogSample {
    pub time_s: f64,
    pub steering_angle_rad: f64,
    pub forward_speed_mps: f64,
    pub lateral_slope_rad: f64,
    pub longitudinal_slope_rad: f64,
    pub measured_rack_force_n: Option<f64>,
}

/// Static road description for a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RoadSetup {
    pub cleats: Vec<CleatSpec>,
    pub slope_mode: SlopeMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrontTireSample {
    pub road: EffectiveRoadPoint,
    pub load: TireLoadState,
    pub output: TireOutput,
}

/// Per-variant part of an estimate sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantSample {
    pub variant: ModelVariant,
    /// State the sample's tire forces were computed from.
    pub state: VehicleState,
    pub front_left: FrontTireSample,
    pub front_right: FrontTireSample,
    pub rear_axle_force_n: f64,
    pub rack_force_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSample {
    pub time_s: f64,
    pub steering_angle_rad: f64,
    pub forward_speed_mps: f64,
    pub lateral_slope_rad: f64,
    pub longitudinal_slope_rad: f64,
    pub measured_rack_force_n: Option<f64>,
    /// Forward speed below the floor: estimates hold their previous value.
    pub degraded: bool,
    pub variants: Vec<VariantSample>,
}

impl EstimateSample {
    pub fn variant(&self, variant: ModelVariant) -> Option<&VariantSample> {
        self.variants.iter().find(|v| v.variant == variant)
    }

    pub fn rack_force(&self, variant: ModelVariant) -> Option<f64> {
        self.variant(variant).map(|v| v.rack_force_n)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error(transparent)]
    Road(#[from] RoadError),
    #[error(transparent)]
    Tire(#[from] TireError),
    #[error(transparent)]
    Vehicle(#[from] VehicleError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("EmptyLog: the log has no samples")]
    EmptyLog,
    #[error("NoVariants: at least one model variant must be selected")]
    NoVariants,
    #[error(
        "NonMonotonicTime: sample {index} at t = {time_s} s does not follow the previous sample"
    )]
    NonMonotonicTime { index: usize, time_s: f64 },
    #[error("NonUniformSampling: sample {index} deviates from the nominal step {dt_s} s")]
    NonUniformSampling { index: usize, dt_s: f64 },
    #[error("InvalidCleat: {0}")]
    InvalidCleat(RoadError),
    #[error("at timestep {index} ({variant}): {source}")]
    Step {
        index: usize,
        variant: ModelVariant,
        source: StepError,
    },
    #[error("NonFinite: {quantity} is not finite at timestep {index} ({variant})")]
    NonFinite {
        index: usize,
        variant: ModelVariant,
        quantity: &'static str,
    },
}

impl EstimatorError {
    /// Short category name for machine-readable reporting.
    pub fn category(&self) -> &'static str {
        match self {
            EstimatorError::EmptyLog => "EmptyLog",
            EstimatorError::NoVariants => "NoVariants",
            EstimatorError::NonMonotonicTime { .. } => "NonMonotonicTime",
            EstimatorError::NonUniformSampling { .. } => "NonUniformSampling",
            EstimatorError::InvalidCleat(_) => "InvalidCleat",
            EstimatorError::Step { source, .. } => match source {
                StepError::Road(RoadError::InvalidCamGeometry { .. }) => "InvalidCamGeometry",
                StepError::Road(RoadError::InvalidCleat { .. }) => "InvalidCleat",
                StepError::Tire(TireError::SlopeOutOfRange { .. }) => "SlopeOutOfRange",
                StepError::Tire(TireError::SlipOutOfRange { .. }) => "SlipOutOfRange",
                StepError::Vehicle(VehicleError::SpeedTooLow { .. }) => "SpeedTooLow",
                StepError::Vehicle(VehicleError::InvalidTimeStep { .. }) => "InvalidTimeStep",
            },
            EstimatorError::NonFinite { .. } => "NonFinite",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self, EstimatorError::NonFinite { .. })
    }
}

/// Checks ordering and uniform spacing; returns the nominal step.
pub fn nominal_time_step(log: &[LogSample]) -> Result<f64, EstimatorError> {
    let (first, last) = match log {
        [] => return Err(EstimatorError::EmptyLog),
        // A single sample is never integrated; any admissible step will do.
        [_] => return Ok(vehicle::MAX_TIME_STEP_S),
        [first, .., last] => (first, last),
    };
    for (index, pair) in log.windows(2).enumerate() {
        if !(pair[1].time_s > pair[0].time_s) {
            return Err(EstimatorError::NonMonotonicTime {
                index: index + 1,
                time_s: pair[1].time_s,
            });
        }
    }
    let dt = (last.time_s - first.time_s) / (log.len() - 1) as f64;
    for (index, sample) in log.iter().enumerate() {
        let nominal = first.time_s + index as f64 * dt;
        if (sample.time_s - nominal).abs() > UNIFORM_SPACING_TOL_S {
            return Err(EstimatorError::NonUniformSampling { index, dt_s: dt });
        }
    }
    Ok(dt)
}

fn finite_check(sample: &VariantSample) -> Option<&'static str> {
    let tire = |t: &FrontTireSample| {
        [
            t.road.effective_height_m,
            t.road.effective_lateral_slope_rad,
            t.road.effective_longitudinal_slope_rad,
            t.load.normal_force_n,
            t.load.radial_force_n,
            t.load.non_lagging_force_n,
            t.load.contact_patch_normal_n,
            t.output.lateral_force_n,
            t.output.pneumatic_trail_m,
            t.output.aligning_moment_nm,
        ]
        .iter()
        .all(|x| x.is_finite())
    };
    if !sample.state.is_finite() {
        Some("vehicle state")
    } else if !tire(&sample.front_left) {
        Some("front-left tire")
    } else if !tire(&sample.front_right) {
        Some("front-right tire")
    } else if !sample.rear_axle_force_n.is_finite() {
        Some("rear axle force")
    } else if !sample.rack_force_n.is_finite() {
        Some("rack force")
    } else {
        None
    }
}

fn run_variant(
    log: &[LogSample],
    params: &ValidatedParams,
    road: &RoadSetup,
    variant: ModelVariant,
    dt_s: f64,
) -> Result<Vec<VariantSample>, EstimatorError> {
    let vp = params.vehicle();
    let tp = params.tire();
    let ignores_road = variant == ModelVariant::FlatRoad2Dof;
    let cleats: &[CleatSpec] = if ignores_road { &[] } else { &road.cleats };

    let mut state = VehicleState::default();
    let mut arclength_m = 0.0;
    let mut held: Option<VariantSample> = None;
    let mut out = Vec::with_capacity(log.len());
    let mut regime_warnings = 0usize;

    for (index, row) in log.iter().enumerate() {
        let at = |source: StepError| EstimatorError::Step {
            index,
            variant,
            source,
        };
        let inputs = DriverInputs::new(row.steering_angle_rad, row.forward_speed_mps);
        let road_inputs = RoadInputs {
            lateral_slope_rad: if ignores_road {
                0.0
            } else {
                row.lateral_slope_rad
            },
            longitudinal_slope_rad: if ignores_road {
                0.0
            } else {
                row.longitudinal_slope_rad
            },
            cleats,
            slope_mode: road.slope_mode,
        };

        let sample = if !(row.forward_speed_mps >= MIN_FORWARD_SPEED_MPS) {
            let mut sample = held.unwrap_or(VariantSample {
                variant,
                state,
                front_left: FrontTireSample::default(),
                front_right: FrontTireSample::default(),
                rear_axle_force_n: 0.0,
                rack_force_n: 0.0,
            });
            sample.state = state;
            sample
        } else {
            if !state.within_small_angle_regime(row.forward_speed_mps) {
                regime_warnings += 1;
            }
            let slope = road_inputs.active_slope_rad();
            let front_slip =
                slip_angle(&state, &inputs, vp, Axle::Front).map_err(|e| at(e.into()))?;
            let rear_slip =
                slip_angle(&state, &inputs, vp, Axle::Rear).map_err(|e| at(e.into()))?;
            let z_a = crate::tire::static_deflection(vp, tp, slope, Axle::Front)
                .map_err(|e| at(e.into()))?;
            let axle_s = arclength_m + vp.dist_cg_front_m;
            let tire_at = |lateral_m: f64| -> Result<FrontTireSample, StepError> {
                let point = effective_profile(axle_s, lateral_m, z_a, &road_inputs, &tp.cam)?;
                let load = load_state(vp, tp, slope, Axle::Front, &point)?;
                let output = tire_output(tp, front_slip, &load)?;
                Ok(FrontTireSample {
                    road: point,
                    load,
                    output,
                })
            };
            let left = tire_at(vp.half_track_m).map_err(at)?;
            let right = tire_at(-vp.half_track_m).map_err(at)?;
            let forces = AxleForces {
                front_lateral_n: left.output.lateral_force_n + right.output.lateral_force_n,
                rear_lateral_n: rear_axle_force(tp, rear_slip),
            };
            let sample = VariantSample {
                variant,
                state,
                front_left: left,
                front_right: right,
                rear_axle_force_n: forces.rear_lateral_n,
                rack_force_n: rack_force(
                    vp,
                    left.output.aligning_moment_nm,
                    right.output.aligning_moment_nm,
                ),
            };
            if index + 1 < log.len() {
                state = vehicle::step(&state, &inputs, &road_inputs, &forces, vp, dt_s)
                    .map_err(|e| at(e.into()))?;
            }
            sample
        };

        if let Some(quantity) = finite_check(&sample) {
            return Err(EstimatorError::NonFinite {
                index,
                variant,
                quantity,
            });
        }
        held = Some(sample);
        out.push(sample);
        arclength_m += row.forward_speed_mps * dt_s;
    }

    if regime_warnings > 0 {
        log::warn!(
            "{variant}: lateral speed reached forward speed on {regime_warnings} samples; \
             small-angle assumptions are violated"
        );
    }
    Ok(out)
}

/// Runs every requested variant over the log.
///
/// Variants share only immutable inputs and run on separate threads; the
/// result does not depend on scheduling.
pub fn simulate(
    log: &[LogSample],
    params: &ValidatedParams,
    road: &RoadSetup,
    variants: &[ModelVariant],
) -> Result<Vec<EstimateSample>, EstimatorError> {
    let dt = nominal_time_step(log)?;
    if variants.is_empty() {
        return Err(EstimatorError::NoVariants);
    }
    for (index, cleat) in road.cleats.iter().enumerate() {
        cleat
            .validate(index)
            .map_err(EstimatorError::InvalidCleat)?;
    }
    let mut unique = variants.to_vec();
    unique.sort();
    unique.dedup();

    let traces: Vec<Result<Vec<VariantSample>, EstimatorError>> = if unique.len() == 1 {
        vec![run_variant(log, params, road, unique[0], dt)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = unique
                .iter()
                .map(|&v| scope.spawn(move || run_variant(log, params, road, v, dt)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("variant thread panicked"))
                .collect()
        })
    };
    let traces = traces.into_iter().collect::<Result<Vec<_>, _>>()?;

    Ok(log
        .iter()
        .enumerate()
        .map(|(k, row)| EstimateSample {
            time_s: row.time_s,
            steering_angle_rad: row.steering_angle_rad,
            forward_speed_mps: row.forward_speed_mps,
            lateral_slope_rad: row.lateral_slope_rad,
            longitudinal_slope_rad: row.longitudinal_slope_rad,
            measured_rack_force_n: row.measured_rack_force_n,
            degraded: !(row.forward_speed_mps >= MIN_FORWARD_SPEED_MPS),
            variants: traces.iter().map(|t| t[k]).collect(),
        })
        .collect())
}

/// Rack-force trace of one variant, empty if the variant was not run.
pub fn rack_force_trace(samples: &[EstimateSample], variant: ModelVariant) -> Vec<f64> {
    samples
        .iter()
        .filter_map(|s| s.rack_force(variant))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("EmptySeries: cannot score an empty series")]
    EmptySeries,
    #[error("LengthMismatch: {estimates} estimates vs {measurements} measurements")]
    LengthMismatch {
        estimates: usize,
        measurements: usize,
    },
}

pub fn mean_absolute_error(estimates: &[f64], measurements: &[f64]) -> Result<f64, MetricsError> {
    if estimates.len() != measurements.len() {
        return Err(MetricsError::LengthMismatch {
            estimates: estimates.len(),
            measurements: measurements.len(),
        });
    }
    if estimates.is_empty() {
        return Err(MetricsError::EmptySeries);
    }
    let total: f64 = estimates
        .iter()
        .zip(measurements)
        .map(|(e, m)| (e - m).abs())
        .sum();
    Ok(total / estimates.len() as f64)
}

/// MAE per variant over measured samples after the settling window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub settle_s: f64,
    pub samples_total: usize,
    pub samples_excluded_settling: usize,
    pub samples_scored: usize,
    /// Empty when the log carries no measurements after settling.
    pub mae_n: BTreeMap<ModelVariant, f64>,
}

pub fn score(samples: &[EstimateSample], variants: &[ModelVariant], settle_s: f64) -> ScoreSummary {
    let start = samples.first().map_or(0.0, |s| s.time_s);
    let settled: Vec<&EstimateSample> = samples
        .iter()
        .filter(|s| s.time_s - start >= settle_s)
        .collect();
    let measured: Vec<&EstimateSample> = settled
        .iter()
        .copied()
        .filter(|s| s.measured_rack_force_n.is_some())
        .collect();
    let truth: Vec<f64> = measured
        .iter()
        .filter_map(|s| s.measured_rack_force_n)
        .collect();
    let mut mae_n = BTreeMap::new();
    for &variant in variants {
        let est: Vec<f64> = measured
            .iter()
            .filter_map(|s| s.rack_force(variant))
            .collect();
        if let Ok(mae) = mean_absolute_error(&est, &truth) {
            mae_n.insert(variant, mae);
        }
    }
    ScoreSummary {
        settle_s,
        samples_total: samples.len(),
        samples_excluded_settling: samples.len() - settled.len(),
        samples_scored: measured.len(),
        mae_n,
    }
}
