//! `kdtl` — synthesize interferometer fringe scans and recover molecular
//! susceptibilities from them.
//!
//! Exit codes: 0 success, 2 validation failure, 3 I/O failure, 4 numerical
//! failure. Log verbosity via the `KDTL_LOG` environment variable
//! (`quiet`, `info`, `debug`; default `info`).

mod commands;
mod logging;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "kdtl",
    about = "Matter-wave fringe-scan simulator and susceptibility inference",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize scan CSVs and a manifest from a configuration file.
    Simulate {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: String,
        /// Output directory for scan files and the manifest.
        #[arg(long)]
        out_dir: String,
        /// Override the master seed from the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// Measured velocity histogram (CSV: velocity_m_per_s,weight),
        /// replacing the configured distribution.
        #[arg(long)]
        vdist_file: Option<String>,
    },
    /// Fit scans, extract chi per voltage and aggregate the weighted mean.
    Fit {
        /// Directory holding the manifest and scan files.
        #[arg(long)]
        scan_dir: String,
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: String,
        /// Output directory for the estimate JSON and per-voltage CSV.
        #[arg(long)]
        out_dir: String,
        /// Exclude this voltage (V) from the weighted mean; repeatable.
        #[arg(long = "exclude-voltage")]
        exclude_voltage: Vec<f64>,
        /// Exclude entries whose visibility ratio drops below this threshold.
        #[arg(long, default_value_t = 0.3)]
        visibility_threshold: f64,
        /// Shift model: "averaged-phase" or "mean-velocity".
        #[arg(long, default_value = "averaged-phase")]
        model: String,
        /// Measured velocity histogram replacing the configured distribution.
        #[arg(long)]
        vdist_file: Option<String>,
    },
    /// Calibrate the deflector geometry factor on a species of known chi.
    Calibrate {
        /// Directory holding the manifest and scan files.
        #[arg(long)]
        scan_dir: String,
        /// Experiment configuration for the calibration species (JSON).
        #[arg(long)]
        config: String,
        /// Known susceptibility of the calibration species (Å³·4πε₀).
        #[arg(long)]
        known_chi: f64,
        /// Output directory for the calibration JSON.
        #[arg(long)]
        out_dir: String,
        /// Measured velocity histogram replacing the configured distribution.
        #[arg(long)]
        vdist_file: Option<String>,
    },
    /// Compare two or more estimates: separations, consistency, systematics.
    Report {
        /// Estimate JSON files (at least two).
        #[arg(required = true)]
        estimates: Vec<String>,
        /// Output path for the report JSON.
        #[arg(long, default_value = "report.json")]
        out: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            out_dir,
            seed,
            vdist_file,
        } => commands::simulate(&config, &out_dir, seed, vdist_file.as_deref()),
        Command::Fit {
            scan_dir,
            config,
            out_dir,
            exclude_voltage,
            visibility_threshold,
            model,
            vdist_file,
        } => commands::fit(
            &scan_dir,
            &config,
            &out_dir,
            &exclude_voltage,
            visibility_threshold,
            &model,
            vdist_file.as_deref(),
        ),
        Command::Calibrate {
            scan_dir,
            config,
            known_chi,
            out_dir,
            vdist_file,
        } => commands::calibrate(&scan_dir, &config, known_chi, &out_dir, vdist_file.as_deref()),
        Command::Report { estimates, out } => commands::report(&estimates, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("kdtl: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
