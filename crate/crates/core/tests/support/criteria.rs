//! Acceptance checks shared by the core integration tests and the
//! acceptance target. Each returns a one-line summary or the reason it
//! failed.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rackforce::estimator::{mean_absolute_error, rack_force_trace, score, simulate, RoadSetup};
use rackforce::params::{
    validate_params, CamGeometry, LoadPoly, LoadVariable, SlopeMode, TireParams, VehicleParams,
    MAX_SLOPE_RAD,
};
use rackforce::road::{effective_profile, envelope_track, road_height};
use rackforce::tire::{self, SlipTerms};
use rackforce::vehicle::{self, Axle, AxleForces};
use rackforce::{
    CleatSpec, DriverInputs, EstimateSample, LogSample, ModelVariant, RoadInputs, ValidatedParams,
    VehicleState,
};

use super::oracles as o;
use super::scenarios::{self, default_params, uniform_log};

pub type Outcome = Result<String, String>;

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

struct Case {
    name: &'static str,
    library: f64,
    oracle: f64,
    frozen: f64,
}

fn hand_cases() -> Vec<Case> {
    let vp = VehicleParams::default();
    let tp = TireParams::default();
    let mut cases = Vec::new();
    let mut push = |name, library, oracle, frozen| {
        cases.push(Case {
            name,
            library,
            oracle,
            frozen,
        })
    };

    let (m, g, lf, lr) = (
        vp.mass_kg,
        vp.gravity_mps2,
        vp.dist_cg_front_m,
        vp.dist_cg_rear_m,
    );
    let l = lf + lr;
    push(
        "normal force, flat",
        tire::normal_force(&vp, 0.0, Axle::Front).unwrap(),
        o::normal_force(m, g, lr, l, 0.0),
        4708.8,
    );
    push(
        "normal force, 11 deg",
        tire::normal_force(&vp, 0.19199, Axle::Front).unwrap(),
        o::normal_force(m, g, lr, l, 0.19199),
        4622.282683076518,
    );
    push(
        "static deflection",
        tire::static_deflection(&vp, &tp, 0.0, Axle::Front).unwrap(),
        o::static_deflection(o::normal_force(m, g, lr, l, 0.0), 200_000.0),
        0.023544,
    );
    push(
        "radial deflection",
        tire::radial_deflection(0.03, 0.02, 0.0),
        o::radial_deflection(0.03, 0.02, 0.0),
        0.01,
    );
    push(
        "radial deflection, inclined",
        tire::radial_deflection(0.03, 0.02, 0.2),
        o::radial_deflection(0.03, 0.02, 0.2),
        0.009800665778412416,
    );

    let linear = TireParams {
        q_fz1: 200_000.0,
        q_fz2: 0.0,
        q_fz3: 0.0,
        ..tp
    };
    push(
        "radial force",
        tire::radial_force(&linear, 0.01, 0.0),
        o::radial_force(200_000.0, 0.0, 0.0, 0.01, 0.0),
        2000.0,
    );
    let cambered = TireParams {
        q_fz3: 1.0,
        ..linear
    };
    push(
        "radial force, camber",
        tire::radial_force(&cambered, 0.01, 0.1),
        o::radial_force(200_000.0, 0.0, 1.0, 0.01, 0.1),
        2020.0,
    );

    let mut nl = tp;
    nl.non_lagging.b_n = LoadPoly::constant(8.0);
    nl.non_lagging.c_n = LoadPoly::constant(1.2);
    nl.non_lagging.d_n = LoadPoly::constant(1000.0);
    push(
        "non-lagging force",
        tire::non_lagging_force(&nl, 0.05, 4000.0, 4708.8),
        o::non_lagging(1000.0, 1.2, 8.0, 0.05, 4000.0),
        240.43814232821424,
    );
    push(
        "contact patch normal",
        tire::contact_patch_normal(4000.0, 500.0, 0.1),
        o::contact_normal(4000.0, 500.0, 0.1),
        4070.251009644547,
    );

    let mut mf = tp;
    mf.lateral.b_y = LoadPoly::constant(10.0);
    mf.lateral.c_y = LoadPoly::constant(1.3);
    mf.lateral.d_y = LoadPoly::constant(4000.0);
    mf.lateral.e_y = LoadPoly::constant(-1.0);
    mf.lateral.s_hy = LoadPoly::constant(0.0);
    mf.lateral.s_vy = LoadPoly::constant(0.0);
    let loads = rackforce::params::TireLoads {
        normal_n: 4708.8,
        radial_n: 0.0,
        contact_patch_normal_n: 0.0,
    };
    push(
        "lateral force",
        tire::lateral_force(&mf, 0.05, &loads).unwrap().0,
        o::lateral_force(10.0, 1.3, 4000.0, -1.0, 0.0, 0.0, 0.05),
        2390.3906480600904,
    );

    let mut tr = tp;
    tr.trail.d_t = LoadPoly::constant(0.03);
    tr.residual.d_r = LoadPoly::constant(0.0);
    let slips = SlipTerms {
        lateral: 0.0,
        trail: 0.0,
        residual: 0.0,
    };
    let t = o::trail(10.0, 1.2, 0.03, -0.5, 0.0, 0.0);
    push(
        "aligning moment",
        tire::aligning_moment(&tr, 2000.0, &slips, &loads).0,
        o::aligning_moment(t, 2000.0, 0.0, 10.0, 0.0),
        -60.0,
    );
    push(
        "rack force",
        tire::rack_force(&vp, 40.0, 35.0),
        o::rack_force(7.0, 40.0, 35.0),
        525.0,
    );

    let cruise = DriverInputs::new(0.0, 10.0);
    let bank = vehicle::dynamics(
        &VehicleState::default(),
        &cruise,
        &RoadInputs::lateral(0.1, &[]),
        &AxleForces::default(),
        &vp,
    )
    .unwrap();
    let (ax, _) = o::bicycle_accel(m, vp.yaw_inertia_kgm2, lf, lr, g, 0.1, 10.0, 0.0, 0.0, 0.0);
    push(
        "bank lateral acceleration",
        bank.lateral_accel_mps2,
        ax,
        -0.9793658173053842,
    );
    let forces = AxleForces {
        front_lateral_n: 1000.0,
        rear_lateral_n: 1000.0,
    };
    let yaw = vehicle::dynamics(
        &VehicleState::default(),
        &cruise,
        &RoadInputs::flat(),
        &forces,
        &vp,
    )
    .unwrap();
    let (_, ay) = o::bicycle_accel(
        m,
        vp.yaw_inertia_kgm2,
        lf,
        lr,
        g,
        0.0,
        10.0,
        0.0,
        1000.0,
        1000.0,
    );
    push(
        "yaw acceleration",
        yaw.yaw_accel_radps2,
        ay,
        -200.0 / 3000.0,
    );

    let slip = vehicle::slip_angle(
        &VehicleState::new(0.5, 0.2),
        &DriverInputs::new(0.05, 10.0),
        &vp,
        Axle::Front,
    )
    .unwrap();
    push(
        "front slip angle",
        slip,
        o::front_slip(0.5, 0.2, lf, 10.0, 0.05),
        0.027842390937322,
    );

    push(
        "mean absolute error",
        mean_absolute_error(&[1.0, 2.0, 3.0], &[1.0, 1.0, 5.0]).unwrap(),
        [0.0f64, 1.0, 2.0].iter().sum::<f64>() / 3.0,
        1.0,
    );
    cases
}

/// Every hand-derived example recomputed by the transcriptions.
pub fn hand_oracles() -> Outcome {
    let cases = hand_cases();
    let mut worst = 0.0f64;
    for c in &cases {
        let e = rel_err(c.library, c.oracle);
        worst = worst.max(e);
        if e > 1e-9 {
            return Err(format!(
                "{}: library {} vs oracle {} (rel {e:.2e})",
                c.name, c.library, c.oracle
            ));
        }
        if rel_err(c.oracle, c.frozen) > 1e-9 {
            return Err(format!(
                "{}: oracle {} drifted from {}",
                c.name, c.oracle, c.frozen
            ));
        }
    }
    Ok(format!(
        "{} examples, worst relative error {worst:.1e}",
        cases.len()
    ))
}

/// Straight driving on a flat road produces no rack force.
pub fn flat_road_null() -> Outcome {
    let params = default_params();
    let log = uniform_log(250.0, 60.0, |_| (0.0, 10.0, 0.0, 0.0));
    let samples = simulate(&log, &params, &RoadSetup::default(), &ModelVariant::ALL)
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for v in ModelVariant::ALL {
        for f in rack_force_trace(&samples, v) {
            worst = worst.max(f.abs());
        }
    }
    if worst < 1e-9 {
        Ok(format!(
            "{} samples, max |F_R| = {worst:e} N",
            samples.len()
        ))
    } else {
        Err(format!("max |F_R| = {worst:e} N"))
    }
}

/// Crown, slalom and oblique cleats: the mirrored drive negates the rack force.
pub fn mirror_symmetry() -> Outcome {
    let params = default_params();
    let log = uniform_log(250.0, 20.0, |t| {
        (
            0.05 * (2.0 * PI * 0.4 * t).sin() + 0.01,
            8.0,
            scenarios::CROWN_SLOPE_RAD * (2.0 * PI * t / 12.0).sin(),
            0.0,
        )
    });
    let mut cleats = scenarios::oblique_cleats();
    cleats.truncate(12);
    for (k, c) in cleats.iter_mut().enumerate() {
        c.start_position_m = 15.0 + 11.3 * k as f64;
        c.yaw_angle_rad = if k % 2 == 0 { 0.4 } else { -0.25 };
    }
    let road = RoadSetup {
        cleats: cleats.clone(),
        slope_mode: SlopeMode::Lateral,
    };
    let mirrored_road = RoadSetup {
        cleats: cleats.iter().map(CleatSpec::mirrored).collect(),
        slope_mode: SlopeMode::Lateral,
    };
    let rr = [ModelVariant::RigidRing];
    let a = simulate(&log, &params, &road, &rr).map_err(|e| e.to_string())?;
    let b = simulate(&scenarios::mirrored_log(&log), &params, &mirrored_road, &rr)
        .map_err(|e| e.to_string())?;
    let (fa, fb) = (rack_force_trace(&a, rr[0]), rack_force_trace(&b, rr[0]));
    let mut worst = 0.0f64;
    for (x, y) in fa.iter().zip(&fb) {
        worst = worst.max((x + y).abs());
    }
    let peak = fa.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    if worst <= 1e-9 && peak > 1.0 {
        Ok(format!(
            "{} samples, peak {peak:.1} N, max |F + F_mirror| = {worst:e} N",
            fa.len()
        ))
    } else {
        Err(format!("max |F + F_mirror| = {worst:e} N, peak {peak} N"))
    }
}

/// Front axle cornering stiffness of the shipped tire at zero slip.
pub fn front_axle_stiffness(params: &ValidatedParams) -> f64 {
    let (vp, tp) = (params.vehicle(), params.tire());
    let point = effective_profile(
        0.0,
        0.0,
        tire::static_deflection(vp, tp, 0.0, Axle::Front).unwrap(),
        &RoadInputs::flat(),
        &tp.cam,
    )
    .unwrap();
    let load = tire::load_state(vp, tp, 0.0, Axle::Front, &point).unwrap();
    let h = 1e-7;
    let f = |a: f64| tire::tire_output(tp, a, &load).unwrap().lateral_force_n;
    -2.0 * (f(h) - f(-h)) / (2.0 * h)
}

/// Closed-loop bicycle model with linear axle forces against the analytic
/// steady-state yaw rate.
pub fn steady_state_cornering() -> Outcome {
    let params = default_params();
    let vp = *params.vehicle();
    let c_f = front_axle_stiffness(&params);
    let c_r = 2.0 * params.tire().rear_cornering_stiffness_npr;
    let l = vp.wheelbase_m();
    let k_us = vp.mass_kg / l * (vp.dist_cg_rear_m / c_f - vp.dist_cg_front_m / c_r);
    let pairs = [
        (5.0, 0.02),
        (10.0, 0.015),
        (15.0, 0.01),
        (20.0, 0.008),
        (25.0, 0.006),
    ];
    let dt = 0.004;
    let mut worst = 0.0f64;
    for (u, delta) in pairs {
        let inputs = DriverInputs::new(delta, u);
        let road = RoadInputs::flat();
        let mut state = VehicleState::default();
        for _ in 0..2500 {
            let forces = AxleForces {
                front_lateral_n: -c_f
                    * vehicle::slip_angle(&state, &inputs, &vp, Axle::Front).unwrap(),
                rear_lateral_n: -c_r
                    * vehicle::slip_angle(&state, &inputs, &vp, Axle::Rear).unwrap(),
            };
            state = vehicle::step(&state, &inputs, &road, &forces, &vp, dt).unwrap();
        }
        let analytic = u * delta / (l + k_us * u * u);
        let e = rel_err(state.yaw_rate_radps, analytic);
        worst = worst.max(e);
        if e > 1e-3 {
            return Err(format!(
                "u = {u}, delta = {delta}: yaw rate {} vs {analytic} ({:.3}%)",
                state.yaw_rate_radps,
                100.0 * e
            ));
        }
    }
    Ok(format!(
        "5 (u, delta) pairs, K_us = {k_us:.3e} rad/(m/s^2), worst deviation {:.4}%",
        100.0 * worst
    ))
}

pub fn random_cleat(rng: &mut ChaCha8Rng, start: f64) -> CleatSpec {
    let mut height: f64 = rng.gen_range(-0.03..0.05);
    if height.abs() < 1e-3 {
        height = 0.01;
    }
    CleatSpec {
        start_position_m: start,
        length_m: rng.gen_range(0.01..0.5),
        height_m: height,
        width_m: rng.gen_range(0.5..4.0),
        yaw_angle_rad: rng.gen_range(-1.2..1.2),
    }
}

/// Tandem-cam heights against a brute-force contact search, and smoothing
/// with cam size.
pub fn enveloping_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e17e10e);
    let cam = CamGeometry::default();
    let mut worst = 0.0f64;
    let mut queries = 0usize;
    let mut touched = 0usize;
    for k in 0..20 {
        let c = random_cleat(&mut rng, 2.0);
        let cleats = [c];
        let half_w = 0.5 * c.width_m;
        let ys = [
            0.0,
            rng.gen_range(-half_w..half_w),
            rng.gen_range(-half_w..half_w),
        ];
        for y in ys {
            let Some((a, b)) = c.track_interval(y) else {
                continue;
            };
            for j in 0..15 {
                let s = a - 0.6 + (b - a + 1.2) * j as f64 / 14.0;
                let env = envelope_track(s, y, &cleats, &cam).map_err(|e| e.to_string())?;
                let (h, rise) = o::brute_force_tandem(s, y, &cleats, &cam);
                let err_h = (env.height_m - h).abs();
                let err_rise = (env.slope_rad.tan() * cam.spacing_m - rise).abs();
                worst = worst.max(err_h).max(err_rise);
                if err_h > 1e-9 || err_rise > 1e-9 {
                    return Err(format!(
                        "cleat {k} ({c:?}) at s = {s}, y = {y}: height {} vs {h}, rise {} vs {rise}",
                        env.height_m,
                        env.slope_rad.tan() * cam.spacing_m
                    ));
                }
                queries += 1;
                touched += usize::from(h != 0.0);
            }
        }
    }
    if touched == 0 {
        return Err("no query touched a cleat".into());
    }

    let step = [CleatSpec {
        start_position_m: 10.0,
        length_m: 5.0,
        height_m: 0.01,
        width_m: 4.0,
        yaw_angle_rad: 0.0,
    }];
    let road = RoadInputs::lateral(0.0, &step);
    let mut maxima = Vec::new();
    for half_length in [0.4, 0.8, 1.6] {
        let cam = CamGeometry {
            half_length_m: half_length,
            ..CamGeometry::default()
        };
        let mut max = 0.0f64;
        for i in 0..4000 {
            let s = 8.0 + i as f64 * 0.001;
            let p = effective_profile(s, 0.0, 0.02, &road, &cam).map_err(|e| e.to_string())?;
            if !p.effective_longitudinal_slope_rad.is_finite() {
                return Err(format!("non-finite slope at s = {s}"));
            }
            max = max.max(p.effective_longitudinal_slope_rad.abs());
        }
        maxima.push(max);
    }
    if !(maxima[0] > maxima[1] && maxima[1] > maxima[2] && maxima[2] > 0.0) {
        return Err(format!(
            "max |beta_y| not decreasing with cam size: {maxima:?}"
        ));
    }
    Ok(format!(
        "{queries} queries over 20 cleats ({touched} on obstacles), worst error {worst:.1e} m; \
         max |beta_y| {:.4}/{:.4}/{:.4} rad for cam half-lengths 0.4/0.8/1.6 m",
        maxima[0], maxima[1], maxima[2]
    ))
}

/// Measurements generated by the rigid-ring variant on a crowned road.
pub fn crowned_self_consistency() -> Result<(f64, f64), String> {
    let params = default_params();
    let mut log = scenarios::crowned_road_log(40.0);
    let road = RoadSetup::default();
    let truth =
        simulate(&log, &params, &road, &[ModelVariant::RigidRing]).map_err(|e| e.to_string())?;
    for (row, f) in log
        .iter_mut()
        .zip(rack_force_trace(&truth, ModelVariant::RigidRing))
    {
        row.measured_rack_force_n = Some(f);
    }
    let samples = simulate(&log, &params, &road, &ModelVariant::ALL).map_err(|e| e.to_string())?;
    let summary = score(&samples, &ModelVariant::ALL, 1.0);
    Ok((
        summary.mae_n[&ModelVariant::RigidRing],
        summary.mae_n[&ModelVariant::FlatRoad2Dof],
    ))
}

/// Centred moving average residual.
pub fn high_pass(x: &[f64], half: usize) -> Vec<f64> {
    let mut prefix = vec![0.0; x.len() + 1];
    for (i, v) in x.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(x.len());
            x[i] - (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

pub struct TransientReport {
    pub peaks: Vec<f64>,
    pub noise_floor: f64,
}

impl TransientReport {
    pub fn detected(&self) -> usize {
        self.peaks
            .iter()
            .filter(|p| **p > 3.0 * self.noise_floor)
            .count()
    }
}

/// Peak high-passed rack force inside each cleat window against the largest
/// value away from all cleats.
pub fn cleat_transients(
    samples: &[EstimateSample],
    variant: ModelVariant,
    cleats: &[CleatSpec],
) -> TransientReport {
    let times: Vec<f64> = samples.iter().map(|s| s.time_s).collect();
    let speeds: Vec<f64> = samples.iter().map(|s| s.forward_speed_mps).collect();
    trace_transients(
        &times,
        &speeds,
        &rack_force_trace(samples, variant),
        cleats,
        0.5,
    )
}

/// Same detector on a bare trace; the front axle position is integrated
/// from the logged speed. `half_window_s` is the half-width of the moving
/// average that is subtracted; zero uses the trace as is.
pub fn trace_transients(
    times: &[f64],
    speeds: &[f64],
    trace: &[f64],
    cleats: &[CleatSpec],
    half_window_s: f64,
) -> TransientReport {
    let vp = VehicleParams::default();
    let dt = times[1] - times[0];
    let half = (half_window_s / dt).round() as usize;
    let residual = if half == 0 {
        trace.to_vec()
    } else {
        high_pass(trace, half)
    };

    let mut s = 0.0;
    let axle_s: Vec<f64> = speeds
        .iter()
        .map(|u| {
            let here = s + vp.dist_cg_front_m;
            s += u * dt;
            here
        })
        .collect();
    let reach = vp.half_track_m + 0.1;
    let window = |c: &CleatSpec, margin: f64| {
        let skew = reach * c.yaw_angle_rad.tan().abs();
        (
            c.start_position_m - skew - 1.0 - margin,
            c.start_position_m + c.length_m / c.yaw_angle_rad.cos() + skew + 1.0 + margin,
        )
    };

    let peaks = cleats
        .iter()
        .map(|c| {
            let (lo, hi) = window(c, 0.0);
            axle_s
                .iter()
                .zip(&residual)
                .filter(|(s, _)| (lo..=hi).contains(*s))
                .fold(0.0f64, |m, (_, r)| m.max(r.abs()))
        })
        .collect();

    let guard_m = (half_window_s + 0.5) * speeds[0];
    let settle = (3.0 / dt) as usize;
    let noise_floor = axle_s
        .iter()
        .zip(&residual)
        .enumerate()
        .filter(|(i, _)| *i >= settle && *i + half < trace.len())
        .filter(|(_, (s, _))| {
            cleats.iter().all(|c| {
                let (lo, hi) = window(c, guard_m);
                !(lo..=hi).contains(*s)
            })
        })
        .fold(0.0f64, |m, (_, (_, r))| m.max(r.abs()));
    TransientReport { peaks, noise_floor }
}

/// Error ordering on the crowned road and one transient per cleat on the
/// oblique-cleat course.
pub fn table_ordering() -> Outcome {
    let (mae_rr, mae_fr) = crowned_self_consistency()?;
    if !(mae_rr == 0.0 && mae_fr > 0.0) {
        return Err(format!(
            "crowned road: MAE RR = {mae_rr}, 2DOF-FR = {mae_fr}"
        ));
    }

    let params = default_params();
    let cleats = scenarios::oblique_cleats();
    let road = RoadSetup {
        cleats: cleats.clone(),
        slope_mode: SlopeMode::Lateral,
    };
    let log = scenarios::cleat_course_log();
    let samples = simulate(&log, &params, &road, &ModelVariant::ALL).map_err(|e| e.to_string())?;
    let rr = cleat_transients(&samples, ModelVariant::RigidRing, &cleats);
    let fr = cleat_transients(&samples, ModelVariant::FlatRoad2Dof, &cleats);
    if rr.detected() != 13 || fr.detected() != 0 {
        return Err(format!(
            "cleat course: RR {} of 13 (floor {:.2} N, peaks {:?}), 2DOF-FR {} (floor {:.2} N)",
            rr.detected(),
            rr.noise_floor,
            rr.peaks,
            fr.detected(),
            fr.noise_floor
        ));
    }
    let weakest = rr.peaks.iter().fold(f64::INFINITY, |m, p| m.min(*p));
    Ok(format!(
        "crowned road MAE RR = {mae_rr} N < 2DOF-FR = {mae_fr:.2} N; cleats: RR 13/13 transients \
         (weakest {weakest:.1} N vs floor {:.2} N), 2DOF-FR 0/13",
        rr.noise_floor
    ))
}

fn poly(rng: &mut ChaCha8Rng, load: LoadVariable, c0: (f64, f64), c1: (f64, f64)) -> LoadPoly {
    let draw = |rng: &mut ChaCha8Rng, r: (f64, f64)| {
        if r.0 == r.1 {
            r.0
        } else {
            rng.gen_range(r.0..r.1)
        }
    };
    LoadPoly::new(load, [draw(rng, c0), draw(rng, c1), 0.0])
}

/// Parameters drawn around a plausible passenger car.
pub fn random_params(rng: &mut ChaCha8Rng) -> (VehicleParams, TireParams) {
    let mass = rng.gen_range(800.0..3500.0);
    let lf = rng.gen_range(0.8..2.0);
    let lr = rng.gen_range(0.8..2.0);
    let vp = VehicleParams {
        mass_kg: mass,
        yaw_inertia_kgm2: mass * lf * lr * rng.gen_range(0.8..1.2),
        dist_cg_front_m: lf,
        dist_cg_rear_m: lr,
        moment_to_rack_ratio_per_m: rng.gen_range(3.0..12.0)
            * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        gravity_mps2: rng.gen_range(9.78..9.83),
        half_track_m: rng.gen_range(0.6..1.0),
    };
    let mut tp = TireParams {
        vertical_stiffness_npm: rng.gen_range(1e5..4e5),
        q_fz1: rng.gen_range(5e4..4e5),
        q_fz2: rng.gen_range(0.0..3e6),
        q_fz3: rng.gen_range(0.0..2.0),
        contact_half_length_m: rng.gen_range(0.05..0.12),
        rear_cornering_stiffness_npr: rng.gen_range(3e4..1e5),
        ..TireParams::default()
    };
    use LoadVariable::*;
    tp.lateral.b_y = poly(rng, Normal, (7.0, 13.0), (0.0, 0.0));
    tp.lateral.c_y = poly(rng, Normal, (1.1, 1.5), (0.0, 0.0));
    tp.lateral.d_y = poly(rng, TotalContact, (0.0, 0.0), (-1.2, -0.8));
    tp.lateral.e_y = poly(rng, Normal, (-2.0, 0.5), (0.0, 0.0));
    tp.lateral.s_hy = poly(rng, Normal, (-0.01, 0.01), (0.0, 0.0));
    tp.lateral.s_vy = poly(rng, Normal, (-50.0, 50.0), (0.0, 0.0));
    tp.trail.b_t = poly(rng, Normal, (5.0, 15.0), (0.0, 0.0));
    tp.trail.c_t = poly(rng, Normal, (1.0, 1.5), (0.0, 0.0));
    tp.trail.d_t = poly(rng, TotalContact, (0.01, 0.03), (0.0, 1e-7));
    tp.trail.e_t = poly(rng, Normal, (-1.0, 0.5), (0.0, 0.0));
    tp.trail.s_ht = poly(rng, Normal, (-0.01, 0.01), (0.0, 0.0));
    tp.residual.b_r = poly(rng, Normal, (5.0, 15.0), (0.0, 0.0));
    tp.residual.d_r = poly(rng, Normal, (-5.0, 5.0), (0.0, 0.0));
    tp.non_lagging.b_n = poly(rng, Normal, (4.0, 12.0), (0.0, 0.0));
    tp.non_lagging.c_n = poly(rng, Normal, (1.0, 1.5), (0.0, 0.0));
    tp.non_lagging.d_n = poly(rng, TotalRadial, (0.0, 0.0), (0.0, 0.2));
    tp.cam = CamGeometry {
        half_length_m: rng.gen_range(0.1..0.5),
        half_height_m: rng.gen_range(0.1..0.3),
        spacing_m: rng.gen_range(0.05..0.2),
        track_half_width_m: rng.gen_range(0.02..0.1),
        exponent: rng.gen_range(1.5..4.0),
    };
    (vp, tp)
}

fn check_finite(label: &str, values: &[f64]) -> Result<(), String> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(format!("{label}: value {i} is {}", values[i])),
        None => Ok(()),
    }
}

fn fuzz_draw(seed: u64, with_run: bool) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (vp, tp) = random_params(&mut rng);
    let params = validate_params(vp, tp).map_err(|e| format!("draw rejected: {e}"))?;
    let slope = rng.gen_range(-0.95..0.95) * MAX_SLOPE_RAD;
    let n_cleats = rng.gen_range(0..4);
    let cleats: Vec<CleatSpec> = (0..n_cleats)
        .map(|k| random_cleat(&mut rng, 5.0 + 0.7 * k as f64))
        .collect();
    let mode = if rng.gen_bool(0.5) {
        SlopeMode::Lateral
    } else {
        SlopeMode::Longitudinal
    };
    let road = RoadInputs {
        lateral_slope_rad: slope,
        longitudinal_slope_rad: -0.5 * slope,
        cleats: &cleats,
        slope_mode: mode,
    };
    let state = VehicleState::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
    // Steering is drawn so the front slip stays inside the tire's |slip| < pi/2 domain.
    let u = rng.gen_range(0.5..40.0);
    let kinematic =
        ((state.lateral_speed_mps + vp.dist_cg_front_m * state.yaw_rate_radps) / u).atan();
    let delta = rng.gen_range((kinematic - 1.4).max(-0.6)..(kinematic + 1.4).min(0.6));
    let inputs = DriverInputs::new(delta, u);
    let s = rng.gen_range(3.0..8.0);

    let front =
        vehicle::slip_angle(&state, &inputs, &vp, Axle::Front).map_err(|e| e.to_string())?;
    let rear = vehicle::slip_angle(&state, &inputs, &vp, Axle::Rear).map_err(|e| e.to_string())?;
    let active = road.active_slope_rad();
    let z_a = tire::static_deflection(&vp, &tp, active, Axle::Front).map_err(|e| e.to_string())?;
    let mut moments = [0.0; 2];
    let mut lateral = 0.0;
    for (i, y) in [vp.half_track_m, -vp.half_track_m].into_iter().enumerate() {
        let raw = road_height(s, y, &cleats);
        let env = envelope_track(s, y, &cleats, &tp.cam).map_err(|e| e.to_string())?;
        let p = effective_profile(s, y, z_a, &road, &tp.cam).map_err(|e| e.to_string())?;
        let load =
            tire::load_state(&vp, &tp, active, Axle::Front, &p).map_err(|e| e.to_string())?;
        let out = tire::tire_output(&tp, front, &load).map_err(|e| e.to_string())?;
        check_finite(
            "front tire",
            &[
                raw,
                env.height_m,
                env.slope_rad,
                p.effective_height_m,
                p.effective_lateral_slope_rad,
                p.effective_longitudinal_slope_rad,
                load.normal_force_n,
                load.static_deflection_m,
                load.radial_deflection_m,
                load.radial_force_n,
                load.non_lagging_force_n,
                load.contact_patch_normal_n,
                out.lateral_force_n,
                out.pneumatic_trail_m,
                out.aligning_moment_nm,
            ],
        )?;
        moments[i] = out.aligning_moment_nm;
        lateral += out.lateral_force_n;
    }
    let forces = AxleForces {
        front_lateral_n: lateral,
        rear_lateral_n: tire::rear_axle_force(&tp, rear),
    };
    let d = vehicle::dynamics(&state, &inputs, &road, &forces, &vp).map_err(|e| e.to_string())?;
    let dt = rng.gen_range(1e-3..vehicle::MAX_TIME_STEP_S);
    let next =
        vehicle::step(&state, &inputs, &road, &forces, &vp, dt).map_err(|e| e.to_string())?;
    check_finite(
        "vehicle",
        &[
            front,
            rear,
            forces.rear_lateral_n,
            tire::rack_force(&vp, moments[0], moments[1]),
            d.lateral_accel_mps2,
            d.yaw_accel_radps2,
            next.lateral_speed_mps,
            next.yaw_rate_radps,
        ],
    )?;

    if with_run {
        let amp = rng.gen_range(0.0..0.1);
        let freq = rng.gen_range(0.1..1.0);
        let u = rng.gen_range(5.0..20.0);
        let bank = rng.gen_range(-0.9..0.9) * MAX_SLOPE_RAD;
        let log: Vec<LogSample> = uniform_log(250.0, 2.0, |t| {
            (amp * (2.0 * PI * freq * t).sin(), u, bank * (t / 2.0), 0.0)
        });
        let setup = RoadSetup {
            cleats: (0..3)
                .map(|k| random_cleat(&mut rng, 3.0 + 3.0 * k as f64))
                .collect(),
            slope_mode: mode,
        };
        let samples =
            simulate(&log, &params, &setup, &ModelVariant::ALL).map_err(|e| e.to_string())?;
        for row in &samples {
            for v in &row.variants {
                check_finite(
                    "run",
                    &[
                        v.rack_force_n,
                        v.state.lateral_speed_mps,
                        v.state.yaw_rate_radps,
                    ],
                )?;
            }
        }
    }
    Ok(())
}

pub const FUZZ_BASE_SEED: u64 = 0x5eed_0000;
pub const FUZZ_DRAWS: u64 = 10_000;

/// Randomized in-precondition draws through every operation.
pub fn fuzz_finiteness() -> Outcome {
    for k in 0..FUZZ_DRAWS {
        let seed = FUZZ_BASE_SEED + k;
        fuzz_draw(seed, k % 100 == 0).map_err(|e| format!("seed {seed:#x}: {e}"))?;
    }
    Ok(format!(
        "{FUZZ_DRAWS} draws (seeds {FUZZ_BASE_SEED:#x}..{:#x}), {} with full runs, all finite",
        FUZZ_BASE_SEED + FUZZ_DRAWS,
        FUZZ_DRAWS / 100
    ))
}
