//! `spinring`: sweep a two-path ring, analyze the trace, report the peaks.
//!
//! Exit codes: 0 ok, 2 usage/config, 3 I/O, 4 data contract,
//! 5 geometric degeneracy.

pub mod commands;
pub mod table;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinring",
    version,
    about = "Spin-dependent flux oscillations in a two-path ring"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sweep the field and write a transmission/resistance trace CSV.
    Trace(TraceArgs),
    /// Detrend a trace column and write its one-sided power spectrum CSV.
    Spectrum(SpectrumArgs),
    /// Detect and classify peaks in a spectrum CSV.
    Peaks(PeaksArgs),
    /// Solid angle and branch phases for a tilted field loop or arc.
    Berry(BerryArgs),
    /// Run the main-peak and side-peak recipes end to end; print PASS/FAIL.
    Demo,
}

#[derive(Args)]
pub struct TraceArgs {
    /// Config file (flat `key = value` lines).
    #[arg(long)]
    pub config: PathBuf,
    /// Output trace CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Override radius_m.
    #[arg(long)]
    pub radius_m: Option<f64>,
    /// Override fermi_velocity_m_s.
    #[arg(long)]
    pub fermi_velocity_m_s: Option<f64>,
    /// Override g_factor.
    #[arg(long)]
    pub g_factor: Option<f64>,
    /// Override thomas_factor.
    #[arg(long)]
    pub thomas_factor: Option<f64>,
    /// Override so_field_tesla (replaces any e_field_v_m).
    #[arg(long)]
    pub so_field_tesla: Option<f64>,
    /// Override e_field_v_m (replaces any so_field_tesla).
    #[arg(long, conflicts_with = "so_field_tesla")]
    pub e_field_v_m: Option<f64>,
    /// Override resistance_scale_ohm.
    #[arg(long)]
    pub resistance_scale_ohm: Option<f64>,
    /// Override mode (`physical` or `flux_only`).
    #[arg(long)]
    pub mode: Option<String>,
    /// Override b_min_tesla.
    #[arg(long)]
    pub b_min_tesla: Option<f64>,
    /// Override b_max_tesla.
    #[arg(long)]
    pub b_max_tesla: Option<f64>,
    /// Override n_samples.
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Override spin_steps.
    #[arg(long)]
    pub spin_steps: Option<usize>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Input trace CSV (first column must be b_tesla).
    #[arg(long, value_name = "PATH", id = "in")]
    pub input: PathBuf,
    /// Column to analyze (e.g. transmission or resistance_ohm).
    #[arg(long, default_value = "resistance_ohm")]
    pub column: String,
    /// Background polynomial order (0..=6).
    #[arg(long, default_value_t = 3)]
    pub detrend_order: usize,
    /// Window: rect or hann.
    #[arg(long, default_value = "hann")]
    pub window: String,
    /// Zero-pad to the next power of two (display smoothing only).
    #[arg(long, default_value_t = false)]
    pub pad_pow2: bool,
    /// Output spectrum CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct PeaksArgs {
    /// Input spectrum CSV.
    #[arg(long, value_name = "PATH", id = "in")]
    pub input: PathBuf,
    /// Peak floor as a fraction of the largest non-DC power.
    #[arg(long, default_value_t = 0.05)]
    pub min_prominence: f64,
    /// Bins a peak must dominate on each side.
    #[arg(long, default_value_t = 2)]
    pub guard_band: usize,
    /// Ring config for the flux-ratio column; defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output peaks CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BerryArgs {
    /// Field tilt from the axis, degrees (meaningful range 0 < tilt < 90).
    #[arg(long)]
    pub tilt_deg: f64,
    /// Arc: `semicircle` (closed by the geodesic) or `full`.
    #[arg(long, default_value = "semicircle")]
    pub arc: String,
    /// Sample count along the arc.
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Trace(args) => commands::run_trace(&args),
        Command::Spectrum(args) => commands::run_spectrum(&args),
        Command::Peaks(args) => commands::run_peaks(&args),
        Command::Berry(args) => commands::run_berry(&args),
        Command::Demo => commands::run_demo(),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("spinring: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
