//! Output artifacts: per-variant estimate CSV, metrics JSON and plot data.
//!
//! Floats use Rust's shortest round-trip formatting, so a written value reads
//! back bit-identical and repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rackforce::estimator::{FrontTireSample, ScoreSummary};
use rackforce::{EstimateSample, ModelVariant};

use crate::error::CliError;

pub const METRICS_FILE: &str = "metrics.json";
pub const PLOT_FILE: &str = "plot_data.csv";

const TIRE_FIELDS: [&str; 12] = [
    "w_m",
    "beta_x_rad",
    "beta_y_rad",
    "fz_N",
    "za_m",
    "rho_z_m",
    "fz_rad_N",
    "fyn_N",
    "fcn_N",
    "fy_N",
    "trail_m",
    "mz_Nm",
];

pub fn estimates_file(variant: ModelVariant) -> String {
    format!("estimates_{}.csv", variant.key())
}

pub fn estimates_header() -> String {
    let mut cols: Vec<String> = [
        "t_s",
        "delta_rad",
        "u_mps",
        "theta_lat_rad",
        "theta_long_rad",
        "v_mps",
        "yaw_rate_radps",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for side in ["left", "right"] {
        for field in TIRE_FIELDS {
            cols.push(format!("{side}_{field}"));
        }
    }
    cols.extend(["rear_fy_N", "rack_N", "degraded"].map(String::from));
    cols.join(",")
}

fn push_tire(row: &mut String, tire: &FrontTireSample) {
    let values = [
        tire.road.effective_height_m,
        tire.road.effective_lateral_slope_rad,
        tire.road.effective_longitudinal_slope_rad,
        tire.load.normal_force_n,
        tire.load.static_deflection_m,
        tire.load.radial_deflection_m,
        tire.load.radial_force_n,
        tire.load.non_lagging_force_n,
        tire.load.contact_patch_normal_n,
        tire.output.lateral_force_n,
        tire.output.pneumatic_trail_m,
        tire.output.aligning_moment_nm,
    ];
    for v in values {
        let _ = write!(row, ",{v}");
    }
}

pub fn render_estimates(samples: &[EstimateSample], variant: ModelVariant) -> String {
    let mut out = estimates_header();
    out.push('\n');
    for s in samples {
        let Some(v) = s.variant(variant) else {
            continue;
        };
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            s.time_s,
            s.steering_angle_rad,
            s.forward_speed_mps,
            s.lateral_slope_rad,
            s.longitudinal_slope_rad,
            v.state.lateral_speed_mps,
            v.state.yaw_rate_radps
        );
        push_tire(&mut out, &v.front_left);
        push_tire(&mut out, &v.front_right);
        let _ = writeln!(
            out,
            ",{},{},{}",
            v.rear_axle_force_n,
            v.rack_force_n,
            u8::from(s.degraded)
        );
    }
    out
}

pub fn plot_header(variants: &[ModelVariant]) -> String {
    let mut cols = vec!["t_s".to_string(), "measured_N".to_string()];
    cols.extend(variants.iter().map(|v| format!("{}_N", v.key())));
    cols.join(",")
}

pub fn render_plot_data(samples: &[EstimateSample], variants: &[ModelVariant]) -> String {
    let mut out = plot_header(variants);
    out.push('\n');
    for s in samples {
        let _ = write!(out, "{},", s.time_s);
        if let Some(m) = s.measured_rack_force_n {
            let _ = write!(out, "{m}");
        }
        for &v in variants {
            match s.rack_force(v) {
                Some(f) => {
                    let _ = write!(out, ",{f}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

#[derive(serde::Serialize)]
struct MetricsDocument<'a> {
    units: &'static str,
    settle_s: f64,
    samples_total: usize,
    samples_excluded_settling: usize,
    samples_scored: usize,
    #[serde(rename = "mae_N")]
    mae_n: &'a std::collections::BTreeMap<ModelVariant, f64>,
}

pub fn render_metrics(summary: &ScoreSummary) -> String {
    let doc = MetricsDocument {
        units: "N",
        settle_s: summary.settle_s,
        samples_total: summary.samples_total,
        samples_excluded_settling: summary.samples_excluded_settling,
        samples_scored: summary.samples_scored,
        mae_n: &summary.mae_n,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("metrics serialize");
    text.push('\n');
    text
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}
