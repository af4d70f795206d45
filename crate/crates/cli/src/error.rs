use std::path::PathBuf;

use rackforce::params::ParamError;
use rackforce::EstimatorError;
use thiserror::Error;

/// Exit status for malformed or inconsistent input.
pub const EXIT_INPUT_ERROR: i32 = 2;
/// Exit status when the numerics produced a non-finite value.
pub const EXIT_NUMERIC_FAILURE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Schema { path: PathBuf, detail: String },
    #[error("{path}: no data rows")]
    EmptyLog { path: PathBuf },
    #[error("{path}: row {row} at t = {time_s} s is not after the previous row")]
    NonMonotonicTime {
        path: PathBuf,
        row: usize,
        time_s: f64,
    },
    #[error("rate {rate_hz} Hz is outside [50, 1000] Hz")]
    RateOutOfRange { rate_hz: f64 },
    #[error("{detail}")]
    InvalidArgument { detail: String },
    #[error("{path}: {detail}")]
    Config { path: PathBuf, detail: String },
    #[error("{0}")]
    Param(ParamError),
    #[error("{0}")]
    Estimator(EstimatorError),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "IoError",
            CliError::Schema { .. } => "SchemaError",
            CliError::EmptyLog { .. } => "EmptyLog",
            CliError::NonMonotonicTime { .. } => "NonMonotonicTime",
            CliError::RateOutOfRange { .. } => "RateOutOfRange",
            CliError::InvalidArgument { .. } => "InvalidArgument",
            CliError::Config { .. } => "ConfigError",
            CliError::Param(e) => param_category(e),
            CliError::Estimator(e) => e.category(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Estimator(e) if e.is_numeric() => EXIT_NUMERIC_FAILURE,
            _ => EXIT_INPUT_ERROR,
        }
    }

    /// Single line: `error[<Category>]: <detail>`.
    pub fn report_line(&self) -> String {
        let detail = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.category(), detail)
    }
}

fn param_category(e: &ParamError) -> &'static str {
    match e {
        ParamError::NonPositiveMass { .. } => "NonPositiveMass",
        ParamError::NonPositive { .. } => "NonPositive",
        ParamError::ZeroRackRatio { .. } => "ZeroRackRatio",
        ParamError::GravityOutOfRange { .. } => "GravityOutOfRange",
        ParamError::NonPositiveStiffness { .. } => "NonPositiveStiffness",
        ParamError::NegativeRadialCoefficient { .. } => "NegativeRadialCoefficient",
        ParamError::NonFinite { .. } => "NonFiniteParameter",
        ParamError::CoefficientRangeError { .. } => "CoefficientRangeError",
        ParamError::InvalidLoadVariable { .. } => "InvalidLoadVariable",
        ParamError::InvalidCamGeometry { .. } => "InvalidCamGeometry",
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        CliError::Estimator(e)
    }
}
