//! Reading driving logs, IMU slope files and cleat maps.
//!
//! File schemas (UTF-8 CSV, header row required):
//!
//! | file   | columns                                          |
//! |--------|--------------------------------------------------|
//! | log    | `t_s,delta_rad,u_mps[,rack_N]` (extra columns ignored) |
//! | slopes | `t_s,theta_lat_rad,theta_long_rad`               |
//! | cleats | `start_m,length_m,height_m,width_m,yaw_deg`      |
//!
//! The log is brought onto a uniform grid at the requested rate; slope
//! channels are linearly interpolated onto that grid and held constant
//! outside the slope file's time span.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rackforce::{CleatSpec, LogSample};

use crate::error::CliError;

pub const MIN_RATE_HZ: f64 = 50.0;
pub const MAX_RATE_HZ: f64 = 1000.0;
pub const DEFAULT_RATE_HZ: f64 = 250.0;
/// Allowed deviation of a log timestamp from the uniform grid.
pub const GRID_TOL_S: f64 = 1e-6;

pub const LOG_COLUMNS: [&str; 3] = ["t_s", "delta_rad", "u_mps"];
pub const LOG_MEASUREMENT_COLUMN: &str = "rack_N";
pub const SLOPE_COLUMNS: [&str; 3] = ["t_s", "theta_lat_rad", "theta_long_rad"];
pub const CLEAT_COLUMNS: [&str; 5] = ["start_m", "length_m", "height_m", "width_m", "yaw_deg"];

/// A driving log on a uniform time base.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivingLog {
    pub rate_hz: f64,
    pub samples: Vec<LogSample>,
}

struct Table {
    path: PathBuf,
    columns: HashMap<String, Vec<f64>>,
    rows: usize,
}

impl Table {
    fn column(&self, name: &str) -> &[f64] {
        &self.columns[name]
    }

    fn has(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }
}

/// Reads a numeric CSV. `strict` rejects columns outside `required` and `optional`.
fn read_table(
    path: &Path,
    required: &[&str],
    optional: &[&str],
    strict: bool,
) -> Result<Table, CliError> {
    let schema = |detail: String| CliError::Schema {
        path: path.to_path_buf(),
        detail,
    };
    let text = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());
    let headers = reader
        .headers()
        .map_err(|e| schema(format!("unreadable header: {e}")))?
        .clone();

    let mut wanted: Vec<(usize, String)> = Vec::new();
    for (idx, name) in headers.iter().enumerate() {
        if wanted.iter().any(|(_, n)| n == name) {
            return Err(schema(format!("duplicate column '{name}'")));
        }
        if required.contains(&name) || optional.contains(&name) {
            wanted.push((idx, name.to_string()));
        } else if strict {
            return Err(schema(format!("unexpected column '{name}'")));
        }
    }
    if headers.is_empty() && !text.is_empty() {
        return Err(schema("missing header".into()));
    }
    if !headers.is_empty() {
        for name in required {
            if !wanted.iter().any(|(_, n)| n == name) {
                return Err(schema(format!("missing column '{name}'")));
            }
        }
    }

    let mut columns: HashMap<String, Vec<f64>> = wanted
        .iter()
        .map(|(_, n)| (n.clone(), Vec::new()))
        .collect();
    let mut rows = 0;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| schema(format!("row {}: {e}", row + 1)))?;
        for (idx, name) in &wanted {
            let cell = record.get(*idx).unwrap_or("");
            let value: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| {
                    schema(format!(
                        "row {}: column '{name}' has invalid value '{cell}'",
                        row + 1
                    ))
                })?;
            columns
                .get_mut(name)
                .expect("column registered")
                .push(value);
        }
        rows += 1;
    }
    Ok(Table {
        path: path.to_path_buf(),
        columns,
        rows,
    })
}

fn check_increasing(table: &Table) -> Result<(), CliError> {
    let t = table.column("t_s");
    for (i, pair) in t.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(CliError::NonMonotonicTime {
                path: table.path.clone(),
                row: i + 2,
                time_s: pair[1],
            });
        }
    }
    Ok(())
}

/// Piecewise-linear interpolation, holding the end values outside `xs`.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x);
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    if x == x0 {
        return y0;
    }
    y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
}

pub fn check_rate(rate_hz: f64) -> Result<(), CliError> {
    if (MIN_RATE_HZ..=MAX_RATE_HZ).contains(&rate_hz) {
        Ok(())
    } else {
        Err(CliError::RateOutOfRange { rate_hz })
    }
}

/// Uniform time grid at `rate_hz` spanning `times`. Returns `times` itself
/// when it already lies on such a grid.
pub fn uniform_grid(times: &[f64], rate_hz: f64) -> Vec<f64> {
    let t0 = times[0];
    let on_grid = times
        .iter()
        .enumerate()
        .all(|(i, t)| (t - (t0 + i as f64 / rate_hz)).abs() <= GRID_TOL_S);
    if on_grid {
        return times.to_vec();
    }
    let span = times[times.len() - 1] - t0;
    let steps = (span * rate_hz + 1e-9).floor() as usize;
    (0..=steps).map(|k| t0 + k as f64 / rate_hz).collect()
}

/// Reads the main log (and optional slope file) onto a uniform grid.
pub fn ingest(
    log_path: &Path,
    slope_path: Option<&Path>,
    rate_hz: f64,
) -> Result<DrivingLog, CliError> {
    check_rate(rate_hz)?;
    let main = read_table(log_path, &LOG_COLUMNS, &[LOG_MEASUREMENT_COLUMN], false)?;
    if main.rows == 0 {
        return Err(CliError::EmptyLog {
            path: log_path.to_path_buf(),
        });
    }
    check_increasing(&main)?;
    let t_src = main.column("t_s");
    let grid = uniform_grid(t_src, rate_hz);
    let resample = |name: &str| -> Vec<f64> {
        let ys = main.column(name);
        if grid.as_slice() == t_src {
            ys.to_vec()
        } else {
            grid.iter().map(|&t| interpolate(t_src, ys, t)).collect()
        }
    };
    let delta = resample("delta_rad");
    let speed = resample("u_mps");
    let rack = main
        .has(LOG_MEASUREMENT_COLUMN)
        .then(|| resample(LOG_MEASUREMENT_COLUMN));

    let (theta_lat, theta_long) = match slope_path {
        None => (vec![0.0; grid.len()], vec![0.0; grid.len()]),
        Some(path) => {
            let slopes = read_table(path, &SLOPE_COLUMNS, &[], true)?;
            if slopes.rows == 0 {
                return Err(CliError::Schema {
                    path: path.to_path_buf(),
                    detail: "no data rows".into(),
                });
            }
            check_increasing(&slopes)?;
            let ts = slopes.column("t_s");
            let on_grid = |name: &str| -> Vec<f64> {
                let ys = slopes.column(name);
                grid.iter().map(|&t| interpolate(ts, ys, t)).collect()
            };
            (on_grid("theta_lat_rad"), on_grid("theta_long_rad"))
        }
    };

    let samples = grid
        .iter()
        .enumerate()
        .map(|(k, &t)| LogSample {
            time_s: t,
            steering_angle_rad: delta[k],
            forward_speed_mps: speed[k],
            lateral_slope_rad: theta_lat[k],
            longitudinal_slope_rad: theta_long[k],
            measured_rack_force_n: rack.as_ref().map(|r| r[k]),
        })
        .collect();
    Ok(DrivingLog { rate_hz, samples })
}

/// Reads a cleat map; yaw is stored in degrees and converted to radians.
pub fn read_cleats(path: &Path) -> Result<Vec<CleatSpec>, CliError> {
    let table = read_table(path, &CLEAT_COLUMNS, &[], true)?;
    let col = |name| table.column(name);
    let cleats: Vec<CleatSpec> = (0..table.rows)
        .map(|i| CleatSpec {
            start_position_m: col("start_m")[i],
            length_m: col("length_m")[i],
            height_m: col("height_m")[i],
            width_m: col("width_m")[i],
            yaw_angle_rad: col("yaw_deg")[i].to_radians(),
        })
        .collect();
    for (i, cleat) in cleats.iter().enumerate() {
        cleat.validate(i).map_err(|e| CliError::Schema {
            path: path.to_path_buf(),
            detail: format!("row {}: {e}", i + 1),
        })?;
    }
    Ok(cleats)
}
