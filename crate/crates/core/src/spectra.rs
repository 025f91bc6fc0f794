//! Spectral ingredients of the down-converted pair: phase mismatch Δz(ν),
//! phase-matching function h(ν), filter amplitude f(ν) and the combined
//! density h(ν)f²(ν) whose Fourier transform is the correlation function.
//!
//! All quantities are in internal units (c = 1, length unit λ₀). A detuning
//! ν is an angular frequency offset from ω₀ in units of c/λ₀, so ω₀ = 2π.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Central wavenumber in internal units.
pub const K0: f64 = TAU;

/// Central (degenerate) angular frequency in internal units.
pub const OMEGA0: f64 = TAU;

/// Below this value of |LΔz| the phase-matching function uses its series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

/// Default filter bandwidth as a fraction of ω₀.
pub const DEFAULT_RELATIVE_BANDWIDTH: f64 = 0.05;

/// Conversion between SI quantities and internal units.
///
/// The reference wavelength is the degenerate signal/idler wavelength λ₀
/// (twice the pump wavelength). Internally the length unit is λ₀ and the
/// time unit is λ₀/c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    reference_wavelength: f64,
}

impl UnitSystem {
    /// `reference_wavelength` in metres.
    pub fn new(reference_wavelength: f64) -> Result<Self> {
        if !(reference_wavelength.is_finite() && reference_wavelength > 0.0) {
            return Err(invalid(
                "reference_wavelength",
                format!("must be positive and finite, got {reference_wavelength}"),
            ));
        }
        Ok(Self {
            reference_wavelength,
        })
    }

    pub fn from_nanometres(nm: f64) -> Result<Self> {
        Self::new(nm * 1e-9)
    }

    /// λ₀ in metres.
    pub fn reference_wavelength(&self) -> f64 {
        self.reference_wavelength
    }

    /// k₀ in internal units; always 2π.
    pub fn k0(&self) -> f64 {
        K0
    }

    /// k₀ in rad/m.
    pub fn k0_si(&self) -> f64 {
        TAU / self.reference_wavelength
    }

    /// ω₀ in rad/s.
    pub fn omega0_si(&self) -> f64 {
        TAU * SPEED_OF_LIGHT / self.reference_wavelength
    }

    /// Internal time unit λ₀/c in seconds.
    pub fn time_unit(&self) -> f64 {
        self.reference_wavelength / SPEED_OF_LIGHT
    }

    pub fn length_from_si(&self, metres: f64) -> f64 {
        metres / self.reference_wavelength
    }

    pub fn length_to_si(&self, length: f64) -> f64 {
        length * self.reference_wavelength
    }

    pub fn time_from_si(&self, seconds: f64) -> f64 {
        seconds / self.time_unit()
    }

    /// Angular frequency (rad/s) to internal detuning.
    pub fn detuning_from_si(&self, rad_per_second: f64) -> f64 {
        rad_per_second * self.time_unit()
    }

    /// Group-delay difference D = 1/v_o − 1/v_e from s/m.
    pub fn group_delay_from_si(&self, seconds_per_metre: f64) -> f64 {
        seconds_per_metre * self.reference_wavelength / self.time_unit()
    }

    /// Group-velocity dispersion D′ = d(1/v)/dω from s²/m.
    pub fn gvd_from_si(&self, seconds2_per_metre: f64) -> f64 {
        let t = self.time_unit();
        seconds2_per_metre * self.reference_wavelength / (t * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrystalKind {
    TypeI,
    TypeII,
}

/// Dispersion model of a collinear degenerate down-converter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseMatching {
    /// Parallel polarizations: Δz = −D′ν², `gvd` = D′.
    TypeI { gvd: f64 },
    /// Orthogonal polarizations: Δz = Dν, `group_delay` = D.
    TypeII { group_delay: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearCrystal {
    length: f64,
    matching: PhaseMatching,
}

impl NonlinearCrystal {
    pub fn new(length: f64, matching: PhaseMatching) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(
                "length",
                format!("crystal length must be positive and finite, got {length}"),
            ));
        }
        let constant = match matching {
            PhaseMatching::TypeI { gvd } => gvd,
            PhaseMatching::TypeII { group_delay } => group_delay,
        };
        if !constant.is_finite() {
            return Err(invalid("dispersion", "dispersion constant must be finite"));
        }
        Ok(Self { length, matching })
    }

    pub fn type_i(length: f64, gvd: f64) -> Result<Self> {
        Self::new(length, PhaseMatching::TypeI { gvd })
    }

    pub fn type_ii(length: f64, group_delay: f64) -> Result<Self> {
        Self::new(length, PhaseMatching::TypeII { group_delay })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn matching(&self) -> PhaseMatching {
        self.matching
    }

    pub fn kind(&self) -> CrystalKind {
        match self.matching {
            PhaseMatching::TypeI { .. } => CrystalKind::TypeI,
            PhaseMatching::TypeII { .. } => CrystalKind::TypeII,
        }
    }

    /// Longitudinal phase mismatch Δz(ν).
    pub fn detuning_mismatch(&self, nu: f64) -> f64 {
        match self.matching {
            PhaseMatching::TypeI { gvd } => -gvd * nu * nu,
            PhaseMatching::TypeII { group_delay } => group_delay * nu,
        }
    }

    /// Phase-matching function h(ν) = (1 − e^{−iLΔz})/(iLΔz).
    ///
    /// Evaluated as e^{−iφ/2}·sin(φ/2)/(φ/2) with φ = LΔz, which is the same
    /// function without the cancellation in 1 − e^{−iφ}. Below
    /// [`SERIES_THRESHOLD`] the second-order series 1 − iφ/2 − φ²/6 is used.
    pub fn phase_matching(&self, nu: f64) -> C64 {
        let phi = self.length * self.detuning_mismatch(nu);
        if phi.abs() < SERIES_THRESHOLD {
            C64::new(1.0 - phi * phi / 6.0, -0.5 * phi)
        } else {
            let half = 0.5 * phi;
            C64::cis(-half) * (half.sin() / half)
        }
    }

    /// Relative group delay between the two photons leaving the crystal,
    /// LD/2 for type II and zero for type I.
    ///
    /// For type II, h(ν) = e^{−iνLD/2}·sinc(νLD/2), so the raw correlation
    /// function is centred at z = LD/2 rather than at zero.
    pub fn walkoff_delay(&self) -> f64 {
        match self.matching {
            PhaseMatching::TypeI { .. } => 0.0,
            PhaseMatching::TypeII { group_delay } => 0.5 * self.length * group_delay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumShape {
    Gaussian,
    Rectangular,
}

/// Real, even filter amplitude f(ν) with f(0) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSpectrum {
    shape: SpectrumShape,
    sigma: f64,
}

impl SignalSpectrum {
    pub fn new(shape: SpectrumShape, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(
                "sigma",
                format!("spectral bandwidth must be positive and finite, got {sigma}"),
            ));
        }
        Ok(Self { shape, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(SpectrumShape::Gaussian, sigma)
    }

    pub fn rectangular(sigma: f64) -> Result<Self> {
        Self::new(SpectrumShape::Rectangular, sigma)
    }

    pub fn shape(&self) -> SpectrumShape {
        self.shape
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn amplitude(&self, nu: f64) -> f64 {
        match self.shape {
            SpectrumShape::Gaussian => {
                let r = nu / self.sigma;
                (-0.5 * r * r).exp()
            }
            SpectrumShape::Rectangular => {
                if nu.abs() <= self.sigma {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl Default for SignalSpectrum {
    fn default() -> Self {
        Self {
            shape: SpectrumShape::Gaussian,
            sigma: DEFAULT_RELATIVE_BANDWIDTH * OMEGA0,
        }
    }
}

/// h(ν)·f²(ν).
pub fn combined_density(crystal: &NonlinearCrystal, spectrum: &SignalSpectrum, nu: f64) -> C64 {
    let f = spectrum.amplitude(nu);
    crystal.phase_matching(nu) * (f * f)
}
