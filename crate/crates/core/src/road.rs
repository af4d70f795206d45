//! Road geometry and the effective road profile seen by a tire.
//!
//! Raw geometry is a flat plane carrying rectangular cleats (negative height
//! for potholes). A tire does not follow sharp edges, so each tire is
//! represented by two lateral tracks, and on each track by a tandem of two
//! superellipse cams that rest on top of the raw profile. The cam heights
//! give the effective height `w`, the longitudinal slope `β_y` and, from the
//! difference between the two tracks, the lateral slope `β_x`.
//!
//! Coordinates: `s` is arclength along the track centreline, `y` is lateral
//! offset, positive to the left. A positive lateral slope means the surface
//! rises towards `+y`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{CamGeometry, ParamError, RoadInputs, SlopeMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoadError {
    #[error("InvalidCamGeometry: {field} must be > 0 and finite, got {value}")]
    InvalidCamGeometry { field: &'static str, value: f64 },
    #[error("InvalidCleat: cleat {index}: {field} = {value} violates {bound}")]
    InvalidCleat {
        index: usize,
        field: &'static str,
        value: f64,
        bound: &'static str,
    },
}

impl From<ParamError> for RoadError {
    fn from(err: ParamError) -> Self {
        match err {
            ParamError::InvalidCamGeometry { field, value } => {
                RoadError::InvalidCamGeometry { field, value }
            }
            other => unreachable!("cam validation produced {other:?}"),
        }
    }
}

/// A rectangular obstacle in plan view.
///
/// The leading edge passes through `(start_position_m, 0)` and is rotated by
/// `yaw_angle_rad` from the track normal. `length_m` is measured perpendicular
/// to that edge, `width_m` along it, centred on the track centreline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CleatSpec {
    pub start_position_m: f64,
    pub length_m: f64,
    pub height_m: f64,
    pub width_m: f64,
    pub yaw_angle_rad: f64,
}

impl CleatSpec {
    pub fn validate(&self, index: usize) -> Result<(), RoadError> {
        let bad = |field, value, bound| RoadError::InvalidCleat {
            index,
            field,
            value,
            bound,
        };
        if !self.start_position_m.is_finite() {
            return Err(bad("start_position_m", self.start_position_m, "finite"));
        }
        if !(self.length_m.is_finite() && self.length_m > 0.0) {
            return Err(bad("length_m", self.length_m, "> 0"));
        }
        if !self.height_m.is_finite() {
            return Err(bad("height_m", self.height_m, "finite"));
        }
        if !(self.width_m.is_finite() && self.width_m > 0.0) {
            return Err(bad("width_m", self.width_m, "> 0"));
        }
        if !(self.yaw_angle_rad.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(bad("yaw_angle_rad", self.yaw_angle_rad, "|yaw| < pi/2"));
        }
        Ok(())
    }

    /// Footprint membership, boundary included.
    pub fn contains(&self, s_m: f64, y_m: f64) -> bool {
        let (sin, cos) = self.yaw_angle_rad.sin_cos();
        let ds = s_m - self.start_position_m;
        let along = ds * cos - y_m * sin;
        let across = ds * sin + y_m * cos;
        (0.0..=self.length_m).contains(&along) && across.abs() <= 0.5 * self.width_m
    }

    /// Closed arclength interval where the line `y = y_m` crosses the footprint.
    pub fn track_interval(&self, y_m: f64) -> Option<(f64, f64)> {
        let (sin, cos) = self.yaw_angle_rad.sin_cos();
        let half_width = 0.5 * self.width_m;
        let mut lo = y_m * sin / cos;
        let mut hi = (self.length_m + y_m * sin) / cos;
        if sin == 0.0 {
            if (y_m * cos).abs() > half_width {
                return None;
            }
        } else {
            let a = (-half_width - y_m * cos) / sin;
            let b = (half_width - y_m * cos) / sin;
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        (lo <= hi).then_some((self.start_position_m + lo, self.start_position_m + hi))
    }

    /// Mirror image about the track centreline.
    pub fn mirrored(&self) -> Self {
        Self {
            yaw_angle_rad: -self.yaw_angle_rad,
            ..*self
        }
    }
}

/// Overlap rule: the larger magnitude wins, ties go to the higher value.
fn merge_height(current: Option<f64>, candidate: f64) -> f64 {
    match current {
        None => candidate,
        Some(h) if candidate.abs() > h.abs() => candidate,
        Some(h) if candidate.abs() == h.abs() => h.max(candidate),
        Some(h) => h,
    }
}

/// Raw (unfiltered) road height at a plan-view point.
pub fn road_height(s_m: f64, y_m: f64, cleats: &[CleatSpec]) -> f64 {
    cleats
        .iter()
        .filter(|c| c.contains(s_m, y_m))
        .fold(None, |acc, c| Some(merge_height(acc, c.height_m)))
        .unwrap_or(0.0)
}

/// Per-tire effective road profile.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EffectiveRoadPoint {
    pub effective_height_m: f64,
    pub effective_lateral_slope_rad: f64,
    pub effective_longitudinal_slope_rad: f64,
}

/// Envelope of one track: tandem midpoint height and longitudinal slope.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrackEnvelope {
    pub height_m: f64,
    pub slope_rad: f64,
}

/// Height of the cam lower boundary above its lowest point at horizontal
/// offset `x` from the cam centre (`|x| <= half_length`).
pub fn cam_boundary_offset(x_m: f64, cam: &CamGeometry) -> f64 {
    let r = (x_m.abs() / cam.half_length_m).min(1.0);
    let n = cam.exponent;
    cam.half_height_m * (1.0 - (1.0 - r.powf(n)).max(0.0).powf(1.0 / n))
}

/// Piecewise-constant profile along one track line.
struct TrackProfile {
    pieces: Vec<(f64, f64, f64)>,
}

impl TrackProfile {
    /// Pieces of `y = y_m` that may reach `[s_lo, s_hi]`. Every footprint
    /// point lies within `length + width/2` of the cleat's start point, so
    /// cleats farther than that are skipped.
    fn new(y_m: f64, cleats: &[CleatSpec], s_lo: f64, s_hi: f64) -> Self {
        let pieces = cleats
            .iter()
            .filter(|c| {
                let reach = c.length_m + 0.5 * c.width_m;
                c.start_position_m + reach >= s_lo && c.start_position_m - reach <= s_hi
            })
            .filter_map(|c| c.track_interval(y_m).map(|(a, b)| (a, b, c.height_m)))
            .collect();
        Self { pieces }
    }

    fn height_at(&self, s_m: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|(a, b, _)| *a <= s_m && s_m <= *b)
            .fold(None, |acc, &(_, _, h)| Some(merge_height(acc, h)))
            .unwrap_or(0.0)
    }

    /// Lowest point of a cam centred at `centre_m` resting on this profile.
    fn cam_rest_height(&self, centre_m: f64, cam: &CamGeometry) -> f64 {
        let lo = centre_m - cam.half_length_m;
        let hi = centre_m + cam.half_length_m;
        let mut points = vec![lo, hi];
        for &(a, b, _) in &self.pieces {
            points.extend([a, b].into_iter().filter(|p| *p > lo && *p < hi));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();

        let offset = |s: f64| cam_boundary_offset(s - centre_m, cam);
        let mut best = f64::NEG_INFINITY;
        for &p in &points {
            best = best.max(self.height_at(p) - offset(p));
        }
        for pair in points.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let level = self.height_at(0.5 * (a + b));
            let nearest = if a <= centre_m && centre_m <= b {
                0.0
            } else {
                offset(a).min(offset(b))
            };
            best = best.max(level - nearest);
        }
        best
    }
}

fn envelope_on_profile(profile: &TrackProfile, s_m: f64, cam: &CamGeometry) -> TrackEnvelope {
    if profile.pieces.is_empty() {
        return TrackEnvelope::default();
    }
    let half = 0.5 * cam.spacing_m;
    let front = profile.cam_rest_height(s_m + half, cam);
    let rear = profile.cam_rest_height(s_m - half, cam);
    TrackEnvelope {
        height_m: 0.5 * (front + rear),
        slope_rad: ((rear - front) / cam.spacing_m).atan(),
    }
}

/// Tandem-cam envelope of the track `y = y_m` at arclength `s_m`.
///
/// Heights are relative to the flat road surface.
pub fn envelope_track(
    s_m: f64,
    y_m: f64,
    cleats: &[CleatSpec],
    cam: &CamGeometry,
) -> Result<TrackEnvelope, RoadError> {
    cam.validate()?;
    let reach = 0.5 * cam.spacing_m + cam.half_length_m;
    let profile = TrackProfile::new(y_m, cleats, s_m - reach, s_m + reach);
    Ok(envelope_on_profile(&profile, s_m, cam))
}

/// Effective road point for a tire centred at `(s_m, y_m)`.
///
/// `static_deflection_m` is the flat-road tire deflection; the effective
/// height equals it when no obstacle is under the tire. Road slopes of the
/// active mode are composed with the enveloped slopes as height gradients.
pub fn effective_profile(
    s_m: f64,
    y_m: f64,
    static_deflection_m: f64,
    road: &RoadInputs<'_>,
    cam: &CamGeometry,
) -> Result<EffectiveRoadPoint, RoadError> {
    cam.validate()?;
    let (bank, grade) = match road.slope_mode {
        SlopeMode::Lateral => (road.lateral_slope_rad, 0.0),
        SlopeMode::Longitudinal => (0.0, road.longitudinal_slope_rad),
    };
    if road.cleats.is_empty() {
        return Ok(EffectiveRoadPoint {
            effective_height_m: static_deflection_m,
            effective_lateral_slope_rad: bank,
            effective_longitudinal_slope_rad: grade,
        });
    }

    let half_width = cam.track_half_width_m;
    let outer = envelope_track(s_m, y_m + half_width, road.cleats, cam)?;
    let inner = envelope_track(s_m, y_m - half_width, road.cleats, cam)?;

    let rise = outer.height_m - inner.height_m;
    let lateral = if rise == 0.0 {
        bank
    } else {
        (bank.tan() + rise / (2.0 * half_width)).atan()
    };
    let mean_slope = 0.5 * (outer.slope_rad + inner.slope_rad);
    let longitudinal = if mean_slope == 0.0 {
        grade
    } else {
        (grade.tan() + mean_slope.tan()).atan()
    };
    Ok(EffectiveRoadPoint {
        effective_height_m: static_deflection_m + 0.5 * (outer.height_m + inner.height_m),
        effective_lateral_slope_rad: lateral,
        effective_longitudinal_slope_rad: longitudinal,
    })
}
