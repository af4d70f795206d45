use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rackforce::ModelVariant;
use rackforce_cli::{run, RunArgs};

/// Estimate steering rack force from a driving log.
#[derive(Parser, Debug)]
#[command(name = "rackforce", version, about)]
struct Cli {
    /// TOML file with [vehicle], [tire] and [road] sections
    #[arg(long)]
    config: PathBuf,

    /// Driving log CSV: t_s,delta_rad,u_mps[,rack_N]
    #[arg(long)]
    log: PathBuf,

    /// IMU slope CSV: t_s,theta_lat_rad,theta_long_rad
    #[arg(long)]
    slopes: Option<PathBuf>,

    /// Cleat map CSV: start_m,length_m,height_m,width_m,yaw_deg
    #[arg(long)]
    cleats: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,

    /// Comma-separated model variants (rr, fr)
    #[arg(long, value_delimiter = ',', default_value = "rr,fr")]
    variants: Vec<ModelVariant>,

    /// Model rate; the log is resampled onto this grid
    #[arg(long, default_value_t = 250.0)]
    rate_hz: f64,

    /// Initial window excluded from the error metrics
    #[arg(long, default_value_t = 1.0)]
    settle_s: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let args = RunArgs {
        config: cli.config,
        log: cli.log,
        slopes: cli.slopes,
        cleats: cli.cleats,
        out: cli.out,
        variants: cli.variants,
        rate_hz: cli.rate_hz,
        settle_s: cli.settle_s,
    };
    match run(&args) {
        Ok(report) => {
            log::info!("{} samples, outputs: {:?}", report.samples, report.written);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.report_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
