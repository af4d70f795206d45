//! Run orchestration: config, log, cleats, simulation, scoring, outputs.

use std::path::{Path, PathBuf};

use rackforce::estimator::{score, RoadSetup, ScoreSummary};
use rackforce::{simulate, ModelVariant};

use crate::config::load_config;
use crate::error::CliError;
use crate::ingest::{ingest, read_cleats, DEFAULT_RATE_HZ};
use crate::output::{
    estimates_file, render_estimates, render_metrics, render_plot_data, write_file, METRICS_FILE,
    PLOT_FILE,
};

pub const DEFAULT_SETTLE_S: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RunArgs {
    pub config: PathBuf,
    pub log: PathBuf,
    pub slopes: Option<PathBuf>,
    pub cleats: Option<PathBuf>,
    pub out: PathBuf,
    pub variants: Vec<ModelVariant>,
    pub rate_hz: f64,
    pub settle_s: f64,
}

impl RunArgs {
    pub fn new(
        config: impl Into<PathBuf>,
        log: impl Into<PathBuf>,
        out: impl Into<PathBuf>,
    ) -> Self {
        Self {
            config: config.into(),
            log: log.into(),
            slopes: None,
            cleats: None,
            out: out.into(),
            variants: ModelVariant::ALL.to_vec(),
            rate_hz: DEFAULT_RATE_HZ,
            settle_s: DEFAULT_SETTLE_S,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub samples: usize,
    pub summary: ScoreSummary,
    pub written: Vec<PathBuf>,
}

/// Variants in canonical order without duplicates.
fn canonical_variants(requested: &[ModelVariant]) -> Result<Vec<ModelVariant>, CliError> {
    let mut v = requested.to_vec();
    v.sort();
    v.dedup();
    if v.is_empty() {
        return Err(CliError::InvalidArgument {
            detail: "--variants must name at least one of rr, fr".into(),
        });
    }
    Ok(v)
}

pub fn run(args: &RunArgs) -> Result<RunReport, CliError> {
    if !(args.settle_s.is_finite() && args.settle_s >= 0.0) {
        return Err(CliError::InvalidArgument {
            detail: format!(
                "--settle-s must be a finite value >= 0, got {}",
                args.settle_s
            ),
        });
    }
    let variants = canonical_variants(&args.variants)?;
    let config = load_config(&args.config)?;
    let params = config.validated()?;
    let log = ingest(&args.log, args.slopes.as_deref(), args.rate_hz)?;
    let cleats = match &args.cleats {
        Some(path) => read_cleats(path)?,
        None => Vec::new(),
    };
    let road = RoadSetup {
        cleats,
        slope_mode: config.road.slope_mode,
    };

    let samples = simulate(&log.samples, &params, &road, &variants)?;
    let summary = score(&samples, &variants, args.settle_s);

    ensure_dir(&args.out)?;
    let mut written = Vec::new();
    for &variant in &variants {
        written.push(write_file(
            &args.out,
            &estimates_file(variant),
            &render_estimates(&samples, variant),
        )?);
    }
    written.push(write_file(
        &args.out,
        METRICS_FILE,
        &render_metrics(&summary),
    )?);
    written.push(write_file(
        &args.out,
        PLOT_FILE,
        &render_plot_data(&samples, &variants),
    )?);

    Ok(RunReport {
        samples: samples.len(),
        summary,
        written,
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}
