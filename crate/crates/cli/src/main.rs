//! `qlitho` command-line front end.
//!
//! Exit status: 0 success, 1 oracle gate failure or I/O error, 2 invalid
//! configuration, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CrystalKindArg, Format, RunConfig, ShapeArg};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
    GateFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::GateFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::GateFailed(m) => write!(f, "oracle gate failed: {m}"),
        }
    }
}

impl From<qlitho::Error> for CliError {
    fn from(e: qlitho::Error) -> Self {
        match e {
            qlitho::Error::GridTooCoarse { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "qlitho", version, about = "Two-photon interferometric lithography simulator")]
struct Cli {
    /// TOML or JSON run configuration (a JSON sidecar from a previous run is accepted)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; data goes to stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Absorption and intensity over a Δx scan
    #[command(allow_negative_numbers = true)]
    Fringe(SimArgs),
    /// Table of the two-photon correlation function u(z)
    #[command(allow_negative_numbers = true)]
    Correlation(SimArgs),
    /// Compare the Fock-space oracle with the analytic amplitude
    #[command(allow_negative_numbers = true)]
    Oracle(SimArgs),
    /// Output wavelengths, phase-matching residuals and the χ⁽²⁾/χ⁽³⁾ crossover
    Phasematch(PhasematchArgs),
    /// Photon order from exposure-threshold measurements
    ExposureFit(ExposureArgs),
    /// FWHM of the n-photon diffraction pattern
    Fwhm(FwhmArgs),
}

/// Overrides for every [`RunConfig`] key. Flags win over the config file.
#[derive(Args, Debug, Default)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub crystal_kind: Option<CrystalKindArg>,
    #[arg(long)]
    pub crystal_length_mm: Option<f64>,
    #[arg(long)]
    pub group_delay_fs_per_mm: Option<f64>,
    #[arg(long)]
    pub gvd_fs2_per_mm: Option<f64>,
    #[arg(long, value_enum)]
    pub spectrum_shape: Option<ShapeArg>,
    /// σ/ω₀
    #[arg(long)]
    pub sigma_rel: Option<f64>,
    /// degenerate signal wavelength λ₀
    #[arg(long)]
    pub wavelength_nm: Option<f64>,
    /// σ_p/ω₀ (0 = plane-wave pump)
    #[arg(long)]
    pub pump_bandwidth_rel: Option<f64>,
    #[arg(long)]
    pub pump_reference_path_sum_nm: Option<f64>,
    #[arg(long)]
    pub l1_nm: Option<f64>,
    #[arg(long)]
    pub l2_nm: Option<f64>,
    #[arg(long)]
    pub x1_nm: Option<f64>,
    #[arg(long)]
    pub x2_nm: Option<f64>,
    /// sets l2 = l1 + dl (applied after --l1-nm/--l2-nm)
    #[arg(long)]
    pub dl_nm: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub nu_max_sigma: Option<f64>,
    #[arg(long)]
    pub dx_min_nm: Option<f64>,
    #[arg(long)]
    pub dx_max_nm: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long)]
    pub z_min_nm: Option<f64>,
    #[arg(long)]
    pub z_max_nm: Option<f64>,
    #[arg(long)]
    pub z_samples: Option<usize>,
    /// Δx samples per geometry in the oracle comparison
    #[arg(long)]
    pub dx_samples: Option<usize>,
    /// node count of the Fock state (differs from --n-points only to test mismatch handling)
    #[arg(long)]
    pub state_nodes: Option<usize>,
    #[arg(long)]
    pub oracle_threshold: Option<f64>,
}

impl SimArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($flag:ident => $($path:ident).+) => {
                if let Some(v) = self.$flag {
                    cfg.$($path).+ = v;
                }
            };
        }
        set!(crystal_kind => crystal.kind);
        set!(crystal_length_mm => crystal.length_mm);
        set!(group_delay_fs_per_mm => crystal.group_delay_fs_per_mm);
        set!(gvd_fs2_per_mm => crystal.gvd_fs2_per_mm);
        set!(spectrum_shape => spectrum.shape);
        set!(sigma_rel => spectrum.sigma_rel);
        set!(wavelength_nm => pump.reference_wavelength_nm);
        set!(pump_bandwidth_rel => pump.bandwidth_rel);
        set!(pump_reference_path_sum_nm => pump.reference_path_sum_nm);
        set!(l1_nm => geometry.l1_nm);
        set!(l2_nm => geometry.l2_nm);
        set!(x1_nm => geometry.x1_nm);
        set!(x2_nm => geometry.x2_nm);
        if let Some(dl) = self.dl_nm {
            cfg.geometry.l2_nm = cfg.geometry.l1_nm + dl;
        }
        set!(n_points => grid.n_points);
        set!(nu_max_sigma => grid.nu_max_sigma);
        set!(dx_min_nm => scan.dx_min_nm);
        set!(dx_max_nm => scan.dx_max_nm);
        set!(n_samples => scan.n_samples);
        set!(z_min_nm => correlation.z_min_nm);
        set!(z_max_nm => correlation.z_max_nm);
        set!(z_samples => correlation.z_samples);
        set!(dx_samples => oracle.dx_samples);
        set!(oracle_threshold => oracle.threshold);
        if self.state_nodes.is_some() {
            cfg.oracle.state_nodes = self.state_nodes;
        }
    }
}

#[derive(Args, Debug)]
pub struct PhasematchArgs {
    #[arg(long, default_value_t = 400.0)]
    pub pump_wavelength_nm: f64,
    /// χ⁽²⁾ in CGS, e.g. 1e-8
    #[arg(long, default_value = "1e-8")]
    pub chi2: String,
    /// χ⁽³⁾ in CGS, e.g. 1e-15
    #[arg(long, default_value = "1e-15")]
    pub chi3: String,
}

#[derive(Args, Debug)]
pub struct ExposureArgs {
    /// intensity (W/cm²) and threshold time (s) as I:t; repeat for each measurement
    #[arg(long = "point", value_name = "I:t", required = true)]
    pub points: Vec<String>,
}

#[derive(Args, Debug)]
pub struct FwhmArgs {
    /// photon number n of the sinc^{2n} pattern
    #[arg(long, default_value_t = 2)]
    pub order: u32,
}

fn load_config(cli: &Cli, args: &SimArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    args.apply(&mut cfg);
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let out = output::Sink::new(cli.out.clone(), cli.format);
    match &cli.command {
        Command::Fringe(args) => commands::fringe(&load_config(cli, args)?, &out),
        Command::Correlation(args) => commands::correlation(&load_config(cli, args)?, &out),
        Command::Oracle(args) => commands::oracle(&load_config(cli, args)?, &out),
        Command::Phasematch(args) => commands::phasematch(args, &out),
        Command::ExposureFit(args) => commands::exposure_fit(args, &out),
        Command::Fwhm(args) => commands::fwhm(args, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
