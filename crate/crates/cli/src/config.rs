//! TOML run configuration: vehicle, tire and road sections.
//!
//! Every section and key is optional and falls back to the shipped defaults;
//! unknown keys are rejected.

use std::path::Path;

use rackforce::params::{validate_params, SlopeMode, TireParams, ValidatedParams, VehicleParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoadConfig {
    pub slope_mode: SlopeMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub vehicle: VehicleParams,
    pub tire: TireParams,
    pub road: RoadConfig,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("run config always serializes")
    }

    pub fn validated(&self) -> Result<ValidatedParams, CliError> {
        validate_params(self.vehicle, self.tire).map_err(CliError::Param)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    RunConfig::from_toml_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        detail: e.message().to_string(),
    })
}
