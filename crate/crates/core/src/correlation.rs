//! The biphoton correlation function
//!
//! u(z) = ∫ h(ν) f²(ν) e^{iνz} dν
//!
//! evaluated by the composite trapezoid rule on a uniform grid symmetric
//! about ν = 0. The sum is left unnormalized (no 1/2π); downstream results
//! only use ratios such as |u(z)|/|u(0)|.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::spectra::{combined_density, NonlinearCrystal, SignalSpectrum};

/// Default number of grid nodes.
pub const DEFAULT_GRID_POINTS: usize = 4096;

/// Default cutoff in units of the filter bandwidth σ.
pub const DEFAULT_NU_MAX_SIGMA: f64 = 8.0;

/// Grids with a cutoff below this many σ truncate the spectrum noticeably.
pub const MIN_NU_MAX_SIGMA: f64 = 5.0;

/// Uniform frequency grid on [−nu_max, nu_max].
///
/// Node j sits at (2j − (n−1))·nu_max/(n−1), so node n−1−j is the exact
/// negation of node j. A single-node grid is the monochromatic limit: one
/// node at ν = 0 with unit weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    n_points: usize,
    nu_max: f64,
}

impl FrequencyGrid {
    pub fn new(n_points: usize, nu_max: f64) -> Result<Self> {
        if n_points == 0 {
            return Err(invalid("n_points", "grid needs at least one node"));
        }
        if n_points == 1 {
            return Ok(Self::monochromatic());
        }
        if !(nu_max.is_finite() && nu_max > 0.0) {
            return Err(invalid(
                "nu_max",
                format!("cutoff must be positive and finite, got {nu_max}"),
            ));
        }
        Ok(Self { n_points, nu_max })
    }

    pub fn monochromatic() -> Self {
        Self {
            n_points: 1,
            nu_max: 0.0,
        }
    }

    /// Grid with cutoff `nu_max_sigma`·σ of the given spectrum.
    pub fn for_spectrum(
        spectrum: &SignalSpectrum,
        n_points: usize,
        nu_max_sigma: f64,
    ) -> Result<Self> {
        Self::new(n_points, nu_max_sigma * spectrum.sigma())
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn nu_max(&self) -> f64 {
        self.nu_max
    }

    pub fn spacing(&self) -> f64 {
        if self.n_points == 1 {
            0.0
        } else {
            2.0 * self.nu_max / (self.n_points - 1) as f64
        }
    }

    pub fn node(&self, j: usize) -> f64 {
        if self.n_points == 1 {
            return 0.0;
        }
        let m = (self.n_points - 1) as f64;
        (2.0 * j as f64 - m) * (self.nu_max / m)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.node(j))
    }

    /// Trapezoid weight of node j.
    pub fn weight(&self, j: usize) -> f64 {
        if self.n_points == 1 {
            1.0
        } else if j == 0 || j == self.n_points - 1 {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }

    /// Index of the node at −ν_j.
    pub fn partner(&self, j: usize) -> usize {
        self.n_points - 1 - j
    }

    /// Whether the cutoff reaches [`MIN_NU_MAX_SIGMA`]·σ.
    pub fn covers(&self, spectrum: &SignalSpectrum) -> bool {
        self.n_points == 1 || self.nu_max >= MIN_NU_MAX_SIGMA * spectrum.sigma()
    }

    /// Largest |z| for which e^{iνz} is sampled above Nyquist.
    pub fn max_argument(&self) -> f64 {
        if self.n_points == 1 {
            f64::INFINITY
        } else {
            PI / self.spacing()
        }
    }

    pub(crate) fn check_argument(&self, z: f64) -> Result<()> {
        let product = z.abs() * self.spacing();
        if product > PI || !product.is_finite() {
            return Err(Error::GridTooCoarse {
                z,
                spacing: self.spacing(),
                product,
            });
        }
        Ok(())
    }
}

/// Tabulated density h(ν_j)f²(ν_j)w_j and an evaluator for u(z).
///
/// By default the type-II group-delay walk-off is compensated: u is
/// evaluated about z_w = LD/2, i.e. u(z) = Σ_j w_j h_j f_j² e^{iν_j(z + z_w)}.
/// Physically this is a delay line of length |z_w| in one arm, and
/// [`crate::fock_oracle`] models it exactly that way.
#[derive(Debug, Clone)]
pub struct CorrelationFunction {
    crystal: NonlinearCrystal,
    spectrum: SignalSpectrum,
    grid: FrequencyGrid,
    walkoff_delay: f64,
    nodes: Vec<f64>,
    density: Vec<C64>,
    u0: C64,
}

impl CorrelationFunction {
    /// Correlation function with the walk-off delay compensated.
    pub fn new(
        crystal: NonlinearCrystal,
        spectrum: SignalSpectrum,
        grid: FrequencyGrid,
    ) -> Result<Self> {
        Self::build(crystal, spectrum, grid, crystal.walkoff_delay())
    }

    /// Correlation function of the raw crystal output (no delay line).
    pub fn uncompensated(
        crystal: NonlinearCrystal,
        spectrum: SignalSpectrum,
        grid: FrequencyGrid,
    ) -> Result<Self> {
        Self::build(crystal, spectrum, grid, 0.0)
    }

    fn build(
        crystal: NonlinearCrystal,
        spectrum: SignalSpectrum,
        grid: FrequencyGrid,
        walkoff_delay: f64,
    ) -> Result<Self> {
        let nodes: Vec<f64> = grid.nodes().collect();
        let density = nodes
            .iter()
            .enumerate()
            .map(|(j, &nu)| combined_density(&crystal, &spectrum, nu) * grid.weight(j))
            .collect();
        let mut corr = Self {
            crystal,
            spectrum,
            grid,
            walkoff_delay,
            nodes,
            density,
            u0: C64::new(0.0, 0.0),
        };
        corr.u0 = corr.evaluate(0.0)?;
        if !(corr.u0.norm() > 0.0 && corr.u0.norm().is_finite()) {
            return Err(invalid(
                "grid",
                "u(0) vanishes: the spectrum is not resolved by the frequency grid",
            ));
        }
        Ok(corr)
    }

    pub fn crystal(&self) -> &NonlinearCrystal {
        &self.crystal
    }

    pub fn spectrum(&self) -> &SignalSpectrum {
        &self.spectrum
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Offset z_w at which the raw correlation is evaluated for z = 0.
    pub fn walkoff_delay(&self) -> f64 {
        self.walkoff_delay
    }

    pub fn u0(&self) -> C64 {
        self.u0
    }

    /// Width scale c/σ of the correlation.
    pub fn coherence_length(&self) -> f64 {
        1.0 / self.spectrum.sigma()
    }

    /// u(z). Fails with [`Error::GridTooCoarse`] if the grid under-samples
    /// e^{iν(z + z_w)}.
    pub fn evaluate(&self, z: f64) -> Result<C64> {
        let arg = z + self.walkoff_delay;
        self.grid.check_argument(arg)?;
        Ok(self
            .nodes
            .iter()
            .zip(&self.density)
            .map(|(&nu, &d)| d * C64::cis(nu * arg))
            .sum())
    }

    pub fn tabulate(&self, zs: &[f64]) -> Result<Vec<CorrelationSample>> {
        let norm = self.u0.norm();
        zs.iter()
            .map(|&z| {
                let u = self.evaluate(z)?;
                Ok(CorrelationSample {
                    z,
                    u,
                    abs_normalized: u.norm() / norm,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSample {
    pub z: f64,
    pub u: C64,
    pub abs_normalized: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// max |u(z) − u(−z)| / |u(0)|
    pub max_even_violation: f64,
    /// max |Im u(z)| / |u(0)|
    pub max_imag_fraction: f64,
}

/// Measures how far u departs from being even and real over `z_samples`.
///
/// Type II (compensated) is both even and real. Type I is even, but h(ν)
/// carries an even quadratic phase, so u(z) is complex in general; its
/// imaginary fraction is a diagnostic, not a defect.
pub fn symmetry_check(corr: &CorrelationFunction, z_samples: &[f64]) -> Result<SymmetryReport> {
    let norm = corr.u0().norm();
    let mut report = SymmetryReport {
        max_even_violation: 0.0,
        max_imag_fraction: 0.0,
    };
    for &z in z_samples {
        let plus = corr.evaluate(z)?;
        let minus = corr.evaluate(-z)?;
        report.max_even_violation = report.max_even_violation.max((plus - minus).norm() / norm);
        report.max_imag_fraction = report
            .max_imag_fraction
            .max(plus.im.abs().max(minus.im.abs()) / norm);
    }
    Ok(report)
}

/// Gaussian pump envelope.
///
/// A pump of finite bandwidth σ_p turns the phase prefactor e^{ik₀(l+x)} of
/// the two-photon amplitude into an envelope of the pump's coherence length.
/// Modelled as exp(−(σ_p·((l+x) − ref))²/2); σ_p = 0 is the plane-wave pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpEnvelope {
    bandwidth: f64,
    reference_path_sum: f64,
}

impl PumpEnvelope {
    pub fn new(bandwidth: f64, reference_path_sum: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth >= 0.0) {
            return Err(invalid(
                "pump_bandwidth",
                format!("must be non-negative and finite, got {bandwidth}"),
            ));
        }
        if !reference_path_sum.is_finite() {
            return Err(invalid("reference_path_sum", "must be finite"));
        }
        Ok(Self {
            bandwidth,
            reference_path_sum,
        })
    }

    pub fn plane_wave() -> Self {
        Self {
            bandwidth: 0.0,
            reference_path_sum: 0.0,
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn reference_path_sum(&self) -> f64 {
        self.reference_path_sum
    }

    /// c/σ_p; infinite for a plane-wave pump.
    pub fn coherence_length(&self) -> f64 {
        if self.bandwidth == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.bandwidth
        }
    }

    /// Envelope factor at total path length `path_sum` = l + x.
    pub fn factor(&self, path_sum: f64) -> f64 {
        if self.bandwidth == 0.0 {
            return 1.0;
        }
        let r = self.bandwidth * (path_sum - self.reference_path_sum);
        (-0.5 * r * r).exp()
    }
}

impl Default for PumpEnvelope {
    fn default() -> Self {
        Self::plane_wave()
    }
}
