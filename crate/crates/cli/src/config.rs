//! Run configuration in user-facing SI units, and its conversion to the
//! library's internal units. The conversion happens only in [`RunConfig::setup`].

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use qlitho::correlation::{FrequencyGrid, PumpEnvelope, MIN_NU_MAX_SIGMA};
use qlitho::interferometer::Geometry;
use qlitho::spectra::{NonlinearCrystal, SignalSpectrum, SpectrumShape, UnitSystem, OMEGA0};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CrystalKindArg {
    TypeI,
    TypeIi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Gaussian,
    Rectangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrystalConfig {
    pub kind: CrystalKindArg,
    pub length_mm: f64,
    /// type II: 1/v_o − 1/v_e
    pub group_delay_fs_per_mm: f64,
    /// type I: d(1/v)/dω
    pub gvd_fs2_per_mm: f64,
}

impl Default for CrystalConfig {
    fn default() -> Self {
        Self {
            kind: CrystalKindArg::TypeIi,
            length_mm: 0.1,
            group_delay_fs_per_mm: 190.0,
            gvd_fs2_per_mm: 75.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub shape: ShapeArg,
    /// σ as a fraction of ω₀
    pub sigma_rel: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            shape: ShapeArg::Gaussian,
            sigma_rel: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpConfig {
    /// degenerate signal/idler wavelength λ₀ (twice the pump wavelength)
    pub reference_wavelength_nm: f64,
    /// σ_p as a fraction of ω₀; 0 is a plane-wave pump
    pub bandwidth_rel: f64,
    /// l + x at the envelope peak
    pub reference_path_sum_nm: f64,
}

impl Default for PumpConfig {
    fn default() -> Self {
        Self {
            reference_wavelength_nm: 800.0,
            bandwidth_rel: 0.0,
            reference_path_sum_nm: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub l1_nm: f64,
    pub l2_nm: f64,
    pub x1_nm: f64,
    pub x2_nm: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            l1_nm: 8000.0,
            l2_nm: 8000.0,
            x1_nm: 8000.0,
            x2_nm: 8000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_points: usize,
    /// cutoff in units of σ
    pub nu_max_sigma: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_points: 4096,
            nu_max_sigma: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub dx_min_nm: f64,
    pub dx_max_nm: f64,
    pub n_samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        // eight two-photon fringe periods at λ₀ = 800 nm
        Self {
            dx_min_nm: 0.0,
            dx_max_nm: 1600.0,
            n_samples: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrelationConfig {
    pub z_min_nm: f64,
    pub z_max_nm: f64,
    pub z_samples: usize,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            z_min_nm: -25000.0,
            z_max_nm: 25000.0,
            z_samples: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSettings {
    pub dx_samples: usize,
    /// node count of the Fock state; defaults to grid.n_points
    pub state_nodes: Option<usize>,
    pub threshold: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            dx_samples: 101,
            state_nodes: None,
            threshold: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub crystal: CrystalConfig,
    pub spectrum: SpectrumConfig,
    pub pump: PumpConfig,
    pub geometry: GeometryConfig,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub correlation: CorrelationConfig,
    pub oracle: OracleSettings,
}

/// Validated simulation inputs in internal units.
#[derive(Debug, Clone)]
pub struct Setup {
    pub units: UnitSystem,
    pub crystal: NonlinearCrystal,
    pub spectrum: SignalSpectrum,
    pub grid: FrequencyGrid,
    pub pump: PumpEnvelope,
    pub geometry: Geometry,
    pub warnings: Vec<String>,
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be finite, got {v}")))
    }
}

impl RunConfig {
    /// Reads TOML, or JSON when the extension is `.json`. A JSON object with
    /// a top-level `config` key (a run sidecar) yields that object.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let mut value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if let Some(inner) = value.get_mut("config") {
                value = inner.take();
            }
            serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
        }
    }

    pub fn setup(&self) -> Result<Setup, CliError> {
        let mut warnings = Vec::new();
        let units = UnitSystem::from_nanometres(positive(
            "pump.reference_wavelength_nm",
            self.pump.reference_wavelength_nm,
        )?)
        .map_err(|e| field_error("pump.reference_wavelength_nm", e))?;

        let length = units.length_from_si(positive("crystal.length_mm", self.crystal.length_mm)? * 1e-3);
        let crystal = match self.crystal.kind {
            CrystalKindArg::TypeI => {
                let gvd = finite("crystal.gvd_fs2_per_mm", self.crystal.gvd_fs2_per_mm)?;
                NonlinearCrystal::type_i(length, units.gvd_from_si(gvd * 1e-30 / 1e-3))
            }
            CrystalKindArg::TypeIi => {
                let d = finite("crystal.group_delay_fs_per_mm", self.crystal.group_delay_fs_per_mm)?;
                NonlinearCrystal::type_ii(length, units.group_delay_from_si(d * 1e-15 / 1e-3))
            }
        }
        .map_err(|e| field_error("crystal", e))?;

        let sigma = positive("spectrum.sigma_rel", self.spectrum.sigma_rel)? * OMEGA0;
        let shape = match self.spectrum.shape {
            ShapeArg::Gaussian => SpectrumShape::Gaussian,
            ShapeArg::Rectangular => SpectrumShape::Rectangular,
        };
        let spectrum = SignalSpectrum::new(shape, sigma).map_err(|e| field_error("spectrum", e))?;

        if self.grid.n_points == 0 {
            return Err(field_error("grid.n_points", "n_points must be ≥ 1"));
        }
        let nu_max_sigma = positive("grid.nu_max_sigma", self.grid.nu_max_sigma)?;
        let grid = FrequencyGrid::for_spectrum(&spectrum, self.grid.n_points, nu_max_sigma)
            .map_err(|e| field_error("grid", e))?;
        if grid.n_points() > 1 && !grid.covers(&spectrum) {
            warnings.push(format!(
                "grid.nu_max_sigma = {nu_max_sigma} is below {MIN_NU_MAX_SIGMA}: the spectrum is truncated"
            ));
        }

        let bw = self.pump.bandwidth_rel;
        if !(bw.is_finite() && bw >= 0.0) {
            return Err(field_error("pump.bandwidth_rel", format!("must be ≥ 0, got {bw}")));
        }
        let ref_sum = finite("pump.reference_path_sum_nm", self.pump.reference_path_sum_nm)?;
        let pump = PumpEnvelope::new(bw * OMEGA0, units.length_from_si(ref_sum * 1e-9))
            .map_err(|e| field_error("pump", e))?;

        let g = &self.geometry;
        let nm = |field: &str, v: f64| -> Result<f64, CliError> {
            let v = finite(field, v)?;
            if v < 0.0 {
                return Err(field_error(field, format!("path length must be ≥ 0, got {v}")));
            }
            Ok(units.length_from_si(v * 1e-9))
        };
        let geometry = Geometry::new(
            nm("geometry.l1_nm", g.l1_nm)?,
            nm("geometry.l2_nm", g.l2_nm)?,
            nm("geometry.x1_nm", g.x1_nm)?,
            nm("geometry.x2_nm", g.x2_nm)?,
        )
        .map_err(|e| field_error("geometry", e))?;

        Ok(Setup {
            units,
            crystal,
            spectrum,
            grid,
            pump,
            geometry,
            warnings,
        })
    }

    /// Checks the scan block and returns (dx_min, dx_max) in internal units.
    pub fn scan_range(&self, setup: &Setup) -> Result<(f64, f64), CliError> {
        if self.scan.n_samples < 2 {
            return Err(field_error("scan.n_samples", "n_samples must be ≥ 2"));
        }
        let lo = finite("scan.dx_min_nm", self.scan.dx_min_nm)?;
        let hi = finite("scan.dx_max_nm", self.scan.dx_max_nm)?;
        if hi <= lo {
            return Err(field_error("scan.dx_max_nm", "dx_max_nm must exceed dx_min_nm"));
        }
        let x_mean = 0.5 * (self.geometry.x1_nm + self.geometry.x2_nm);
        if lo.abs().max(hi.abs()) > x_mean {
            return Err(field_error(
                "scan",
                format!("|dx| up to {} nm exceeds the mean output arm length {x_mean} nm", lo.abs().max(hi.abs())),
            ));
        }
        Ok((setup.nm_to_internal(lo), setup.nm_to_internal(hi)))
    }

    /// Uniform z samples in nm.
    pub fn z_samples_nm(&self) -> Result<Vec<f64>, CliError> {
        let c = &self.correlation;
        if c.z_samples < 2 {
            return Err(field_error("correlation.z_samples", "z_samples must be ≥ 2"));
        }
        let lo = finite("correlation.z_min_nm", c.z_min_nm)?;
        let hi = finite("correlation.z_max_nm", c.z_max_nm)?;
        if hi <= lo {
            return Err(field_error("correlation.z_max_nm", "z_max_nm must exceed z_min_nm"));
        }
        let n = c.z_samples - 1;
        Ok((0..=n)
            .map(|k| {
                // symmetric ranges give exactly mirrored samples
                let t = (2 * k as i64 - n as i64) as f64 / n as f64;
                0.5 * (lo + hi) + 0.5 * (hi - lo) * t
            })
            .collect())
    }
}

impl Setup {
    pub fn nm_to_internal(&self, nm: f64) -> f64 {
        self.units.length_from_si(nm * 1e-9)
    }

    pub fn internal_to_nm(&self, length: f64) -> f64 {
        self.units.length_to_si(length) * 1e9
    }
}
