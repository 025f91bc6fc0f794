//! The two-photon interferometer.
//!
//! Channel a travels l₁ to a 50/50 beamsplitter, channel b travels l₂. The
//! two beamsplitter outputs travel x₁ and x₂ and meet head-on at a point of
//! the substrate. Moving that point along the substrate changes
//! Δx = (x₂ − x₁)/2 while x = x₁ + x₂ stays fixed.
//!
//! Beamsplitter convention: transmission 1/√2 (a → x₂, b → x₁), reflection
//! i/√2 (a → x₁, b → x₂).
//!
//! With k(ν) = k₀ + ν and the pair a(ν)b(−ν), the vacuum amplitude reduces to
//!
//! A = e^{ik₀(l+x)} [u(2Δx − Δl) − u(−2Δx − Δl) + 2i·u(−Δl)·cos(2k₀Δx)]
//!
//! where the first two terms are the both-transmitted and both-reflected
//! paths and the last is the two paths that put both photons into the same
//! output beam. At Δl = 0 the first two cancel (u is even) and
//! |A|² = 4|u(0)|²cos²(2k₀Δx): a fringe of period λ₀/4.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::correlation::{CorrelationFunction, FrequencyGrid, PumpEnvelope};
use crate::error::{invalid, Result};
use crate::spectra::{NonlinearCrystal, SignalSpectrum, K0};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Path lengths of the interferometer in internal units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub l1: f64,
    pub l2: f64,
    pub x1: f64,
    pub x2: f64,
}

impl Geometry {
    pub fn new(l1: f64, l2: f64, x1: f64, x2: f64) -> Result<Self> {
        for (name, v) in [("l1", l1), ("l2", l2), ("x1", x1), ("x2", x2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("path length must be ≥ 0, got {v}")));
            }
        }
        Ok(Self { l1, l2, x1, x2 })
    }

    /// Arms of equal length l and substrate point at offset `dx` from the
    /// centre of a pair of output arms of mean length `x_mean`.
    pub fn balanced(l: f64, x_mean: f64, dx: f64) -> Result<Self> {
        Self::new(l, l, x_mean - dx, x_mean + dx)
    }

    /// l = l₂ + l₁
    pub fn l_sum(&self) -> f64 {
        self.l2 + self.l1
    }

    /// Δl = l₂ − l₁
    pub fn dl(&self) -> f64 {
        self.l2 - self.l1
    }

    /// x = x₂ + x₁
    pub fn x_sum(&self) -> f64 {
        self.x2 + self.x1
    }

    /// Δx = (x₂ − x₁)/2, the coordinate along the substrate.
    pub fn dx(&self) -> f64 {
        0.5 * (self.x2 - self.x1)
    }

    /// Same arms, substrate point moved to `dx` keeping x fixed.
    pub fn with_dx(&self, dx: f64) -> Result<Self> {
        let mean = 0.5 * self.x_sum();
        Self::new(self.l1, self.l2, mean - dx, mean + dx)
    }

    /// Adds a delay line of length |delay| to arm 1 (delay > 0) or arm 2
    /// (delay < 0), shifting Δl by −delay.
    pub fn with_delay_line(&self, delay: f64) -> Self {
        let mut g = *self;
        if delay >= 0.0 {
            g.l1 += delay;
        } else {
            g.l2 -= delay;
        }
        g
    }
}

/// Propagation coefficients from the two input channels to the substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCoefficients {
    /// a transmitted into arm x₂
    pub a_to_x2: C64,
    /// a reflected into arm x₁
    pub a_to_x1: C64,
    /// b transmitted into arm x₁
    pub b_to_x1: C64,
    /// b reflected into arm x₂
    pub b_to_x2: C64,
}

impl FieldCoefficients {
    /// Total coefficient of a(ν) in the field at the substrate.
    pub fn a_total(&self) -> C64 {
        self.a_to_x2 + self.a_to_x1
    }

    /// Total coefficient of b(ν) in the field at the substrate.
    pub fn b_total(&self) -> C64 {
        self.b_to_x1 + self.b_to_x2
    }
}

/// Coefficients of a(ν) and b(ν) in E⁺ at the substrate, k(ν) = k₀ + ν.
pub fn field_coefficients(geom: &Geometry, nu: f64) -> FieldCoefficients {
    let k = K0 + nu;
    let t = C64::new(FRAC_1_SQRT_2, 0.0);
    let r = C64::new(0.0, FRAC_1_SQRT_2);
    FieldCoefficients {
        a_to_x2: t * C64::cis(k * (geom.l1 + geom.x2)),
        a_to_x1: r * C64::cis(k * (geom.l1 + geom.x1)),
        b_to_x1: t * C64::cis(k * (geom.l2 + geom.x1)),
        b_to_x2: r * C64::cis(k * (geom.l2 + geom.x2)),
    }
}

/// The lossless 50/50 beamsplitter (1/√2)[[1, i], [i, 1]].
pub fn beamsplitter_matrix() -> [[C64; 2]; 2] {
    let t = C64::new(FRAC_1_SQRT_2, 0.0);
    let r = C64::new(0.0, FRAC_1_SQRT_2);
    [[t, r], [r, t]]
}

/// Contributions of the four two-photon paths to A.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PathAmplitudes {
    /// (a) both photons transmitted
    pub both_transmitted: C64,
    /// (b) both photons reflected
    pub both_reflected: C64,
    /// (c) a transmitted, b reflected: both end up in arm x₂
    pub transmitted_reflected: C64,
    /// (d) a reflected, b transmitted: both end up in arm x₁
    pub reflected_transmitted: C64,
}

impl PathAmplitudes {
    pub fn total(&self) -> C64 {
        self.both_transmitted
            + self.both_reflected
            + self.transmitted_reflected
            + self.reflected_transmitted
    }

    /// (a) + (b), the pair that cancels at Δl = 0.
    pub fn coincidence_pair(&self) -> C64 {
        self.both_transmitted + self.both_reflected
    }

    /// (c) + (d), both photons in one output beam.
    pub fn bunched_pair(&self) -> C64 {
        self.transmitted_reflected + self.reflected_transmitted
    }
}

/// Source model for [`path_amplitudes`].
#[derive(Debug, Clone, Copy)]
pub enum Illumination<'a> {
    /// Monochromatic pair, h(ν) → δ(ν).
    PlaneWave,
    Broadband(&'a CorrelationFunction),
}

/// The four path amplitudes.
///
/// The plane-wave route multiplies the monochromatic beamsplitter
/// coefficients directly (factor 2 from the two operator orderings). The
/// broadband route attributes the terms of the reduced amplitude to paths.
pub fn path_amplitudes(geom: &Geometry, illumination: Illumination<'_>) -> Result<PathAmplitudes> {
    match illumination {
        Illumination::PlaneWave => {
            let c = field_coefficients(geom, 0.0);
            Ok(PathAmplitudes {
                both_transmitted: 2.0 * c.a_to_x2 * c.b_to_x1,
                both_reflected: 2.0 * c.a_to_x1 * c.b_to_x2,
                transmitted_reflected: 2.0 * c.a_to_x2 * c.b_to_x2,
                reflected_transmitted: 2.0 * c.a_to_x1 * c.b_to_x1,
            })
        }
        Illumination::Broadband(corr) => {
            let dl = geom.dl();
            let dx = geom.dx();
            let u_t = corr.evaluate(2.0 * dx - dl)?;
            let u_r = corr.evaluate(-2.0 * dx - dl)?;
            let u_b = corr.evaluate(-dl)?;
            let l_phase = C64::cis(K0 * (geom.l_sum() + corr.walkoff_delay().abs()));
            let x_phase = C64::cis(K0 * geom.x_sum());
            Ok(PathAmplitudes {
                both_transmitted: l_phase * x_phase * u_t,
                both_reflected: -l_phase * x_phase * u_r,
                transmitted_reflected: l_phase * I * C64::cis(2.0 * K0 * geom.x2) * u_b,
                reflected_transmitted: l_phase * I * C64::cis(2.0 * K0 * geom.x1) * u_b,
            })
        }
    }
}

/// A = e^{ik₀(l+x)}[u(2Δx − Δl) − u(−2Δx − Δl) + 2i·u(−Δl)cos(2k₀Δx)].
///
/// `l` includes the walk-off delay line carried by `corr`.
pub fn two_photon_amplitude(geom: &Geometry, corr: &CorrelationFunction) -> Result<C64> {
    let dl = geom.dl();
    let dx = geom.dx();
    let bracket = corr.evaluate(2.0 * dx - dl)? - corr.evaluate(-2.0 * dx - dl)?
        + 2.0 * I * corr.evaluate(-dl)? * (2.0 * K0 * dx).cos();
    let phase = K0 * (geom.l_sum() + corr.walkoff_delay().abs() + geom.x_sum());
    Ok(C64::cis(phase) * bracket)
}

/// [`two_photon_amplitude`] scaled by a finite-bandwidth pump envelope.
pub fn two_photon_amplitude_with_pump(
    geom: &Geometry,
    corr: &CorrelationFunction,
    pump: &PumpEnvelope,
) -> Result<C64> {
    let a = two_photon_amplitude(geom, corr)?;
    Ok(a * pump.factor(geom.l_sum() + geom.x_sum()))
}

/// Two-photon absorption rate |A|² (arbitrary units).
pub fn absorption_rate(geom: &Geometry, corr: &CorrelationFunction) -> Result<f64> {
    Ok(two_photon_amplitude(geom, corr)?.norm_sqr())
}

/// Closed form at Δl = 0: 4|u(0)|²cos²(2k₀Δx).
pub fn balanced_absorption_rate(corr: &CorrelationFunction, dx: f64) -> f64 {
    let c = (2.0 * K0 * dx).cos();
    4.0 * corr.u0().norm_sqr() * c * c
}

/// Single-photon intensity normalized to a unit background:
///
/// I = 1 + cos(2k₀Δx)·∫|h|²f² sin(2νΔx) dν / ∫|h|²f² dν.
///
/// The integrand of the numerator is odd, so I = 1 for every Δx. The result
/// does not depend on l₁, l₂.
pub fn intensity(
    geom: &Geometry,
    crystal: &NonlinearCrystal,
    spectrum: &SignalSpectrum,
    grid: &FrequencyGrid,
) -> f64 {
    let dx = geom.dx();
    let (mut odd, mut norm) = (0.0, 0.0);
    for (j, nu) in grid.nodes().enumerate() {
        let f = spectrum.amplitude(nu);
        let w = grid.weight(j) * crystal.phase_matching(nu).norm_sqr() * f * f;
        odd += w * (2.0 * nu * dx).sin();
        norm += w;
    }
    1.0 + (2.0 * K0 * dx).cos() * odd / norm
}

/// Classical single-photon standing-wave fringe cos²(k₀Δx).
pub fn classical_fringe(dx: f64) -> f64 {
    let c = (K0 * dx).cos();
    c * c
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeSample {
    pub dx: f64,
    pub absorption: f64,
    pub intensity: f64,
}

/// Uniform scan of Δx over `dx_range` (both ends included).
///
/// `template` fixes l₁, l₂ and x = x₁ + x₂; each sample moves the substrate
/// point. Samples are returned in order of increasing index.
pub fn fringe_scan(
    template: &Geometry,
    corr: &CorrelationFunction,
    pump: &PumpEnvelope,
    dx_range: (f64, f64),
    n_samples: usize,
) -> Result<Vec<FringeSample>> {
    if n_samples < 2 {
        return Err(invalid("n_samples", "n_samples must be ≥ 2"));
    }
    let (lo, hi) = dx_range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(invalid("dx_range", format!("need dx_min < dx_max, got [{lo}, {hi}]")));
    }
    let step = (hi - lo) / (n_samples - 1) as f64;
    (0..n_samples)
        .into_par_iter()
        .map(|k| {
            let dx = if k == n_samples - 1 { hi } else { lo + step * k as f64 };
            let geom = template.with_dx(dx)?;
            Ok(FringeSample {
                dx,
                absorption: two_photon_amplitude_with_pump(&geom, corr, pump)?.norm_sqr(),
                intensity: intensity(&geom, corr.crystal(), corr.spectrum(), corr.grid()),
            })
        })
        .collect()
}

/// (max − min)/(max + min); zero for an all-zero input.
pub fn visibility(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi + lo == 0.0 || values.is_empty() {
        0.0
    } else {
        (hi - lo) / (hi + lo)
    }
}

/// Period of the two-photon fringe in Δx, λ₀/4.
pub fn two_photon_fringe_period() -> f64 {
    std::f64::consts::PI / (2.0 * K0)
}

/// Visibility of the absorption fringe over one period starting at the
/// template's Δx, sampled at `n_per_period` points (rounded up to a multiple
/// of 4 so the fringe node is sampled).
pub fn fringe_visibility(
    template: &Geometry,
    corr: &CorrelationFunction,
    pump: &PumpEnvelope,
    n_per_period: usize,
) -> Result<f64> {
    let n = n_per_period.max(64).div_ceil(4) * 4;
    let period = two_photon_fringe_period();
    let start = template.dx();
    let values = (0..n)
        .map(|k| {
            let geom = template.with_dx(start + period * k as f64 / n as f64)?;
            Ok(two_photon_amplitude_with_pump(&geom, corr, pump)?.norm_sqr())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(visibility(&values))
}

/// Dominant spatial frequency of a uniformly sampled signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    /// Peak FFT bin (1 ≤ bin ≤ n/2).
    pub bin: usize,
    /// Frequency of that bin in cycles per unit length.
    pub frequency: f64,
    /// Bin width 1/(n·spacing).
    pub bin_width: f64,
}

/// Locates the largest non-DC peak of the FFT magnitude of `values`.
pub fn dominant_frequency(values: &[f64], spacing: f64) -> Result<SpectralPeak> {
    let n = values.len();
    if n < 4 {
        return Err(invalid("values", "need at least 4 samples for a spectrum"));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(invalid("spacing", "sample spacing must be positive"));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<C64> = values.iter().map(|&v| C64::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bin = (1..=n / 2)
        .max_by(|&a, &b| buf[a].norm_sqr().total_cmp(&buf[b].norm_sqr()))
        .expect("n ≥ 4");
    let bin_width = 1.0 / (n as f64 * spacing);
    Ok(SpectralPeak {
        bin,
        frequency: bin as f64 * bin_width,
        bin_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::OMEGA0;

    fn default_corr() -> CorrelationFunction {
        let spectrum = SignalSpectrum::default();
        let crystal = NonlinearCrystal::type_ii(125.0, 0.057).unwrap();
        let grid = FrequencyGrid::for_spectrum(&spectrum, 4096, 8.0).unwrap();
        CorrelationFunction::new(crystal, spectrum, grid).unwrap()
    }

    #[test]
    fn geometry_derived_quantities() {
        let g = Geometry::new(1.0, 3.5, 2.0, 2.5).unwrap();
        assert_eq!(g.l_sum(), 4.5);
        assert_eq!(g.dl(), 2.5);
        assert_eq!(g.x_sum(), 4.5);
        assert_eq!(g.dx(), 0.25);
        let h = g.with_dx(-0.5).unwrap();
        assert_eq!(h.x_sum(), g.x_sum());
        assert_eq!(h.dx(), -0.5);
        assert!(Geometry::new(-1.0, 0.0, 0.0, 0.0).is_err());
        assert!(g.with_dx(5.0).is_err());
    }

    #[test]
    fn bare_beamsplitter_coefficients() {
        let g = Geometry::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let c = field_coefficients(&g, 0.0);
        let t = C64::new(FRAC_1_SQRT_2, 0.0);
        let r = C64::new(0.0, FRAC_1_SQRT_2);
        assert_eq!((c.a_to_x2, c.a_to_x1, c.b_to_x1, c.b_to_x2), (t, r, t, r));
    }

    #[test]
    fn coefficient_moduli() {
        let g = Geometry::new(3.7, 1.2, 8.1, 0.4).unwrap();
        for &nu in &[-1.0, 0.0, 0.33, 2.0] {
            let c = field_coefficients(&g, nu);
            for z in [c.a_to_x2, c.a_to_x1, c.b_to_x1, c.b_to_x2] {
                assert!((z.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn beamsplitter_is_unitary() {
        let m = beamsplitter_matrix();
        for i in 0..2 {
            for j in 0..2 {
                let dot: C64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - C64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn plane_wave_paths() {
        let g = Geometry::new(2.0, 2.0, 1.0, 1.3).unwrap();
        let p = path_amplitudes(&g, Illumination::PlaneWave).unwrap();
        assert!(p.coincidence_pair().norm() < 1e-14);
        let expect = 2.0 * (2.0 * K0 * g.dx()).cos();
        assert!((p.total().norm() - expect.abs()).abs() < 1e-13);
    }

    #[test]
    fn broadband_paths_cancel_and_sum() {
        let corr = default_corr();
        for k in 0..20 {
            let dx = -1.0 + 0.1 * k as f64;
            let g = Geometry::balanced(10.0, 10.0, dx).unwrap();
            let p = path_amplitudes(&g, Illumination::Broadband(&corr)).unwrap();
            assert!(p.coincidence_pair().norm() / corr.u0().norm() < 1e-10);
            let a = two_photon_amplitude(&g, &corr).unwrap();
            assert!((p.total() - a).norm() <= 1e-12 * corr.u0().norm());
            let fringe = 4.0 * corr.u0().norm_sqr() * (2.0 * K0 * dx).cos().powi(2);
            assert!((p.bunched_pair().norm_sqr() - fringe).abs() < 1e-10 * fringe.max(1.0));
        }
    }

    #[test]
    fn centre_point_is_maximal() {
        let corr = default_corr();
        let g = Geometry::balanced(5.0, 5.0, 0.0).unwrap();
        let a = two_photon_amplitude(&g, &corr).unwrap();
        assert!((a.norm() - 2.0 * corr.u0().norm()).abs() < 1e-12 * a.norm());
        let rate = absorption_rate(&g, &corr).unwrap();
        assert!((rate - 4.0 * corr.u0().norm_sqr()).abs() < 1e-12 * rate);
    }

    #[test]
    fn equal_output_arms_cancel_first_terms() {
        // Δx = 0, Δl ≠ 0: u(−Δl) − u(−Δl) = 0 exactly
        let corr = default_corr();
        let g = Geometry::new(4.0, 5.3, 6.0, 6.0).unwrap();
        let a = two_photon_amplitude(&g, &corr).unwrap();
        let u = corr.evaluate(-g.dl()).unwrap();
        assert!((a.norm() - 2.0 * u.norm()).abs() < 1e-14 * corr.u0().norm());
    }

    #[test]
    fn fringe_zero_and_period() {
        let corr = default_corr();
        let g = Geometry::balanced(10.0, 10.0, 0.125).unwrap();
        let rate = absorption_rate(&g, &corr).unwrap();
        assert!(rate < 1e-24 * corr.u0().norm_sqr());
        assert_eq!(two_photon_fringe_period(), 0.25);
        for k in 0..10 {
            let dx = 0.037 * k as f64;
            let a = absorption_rate(&Geometry::balanced(10.0, 10.0, dx).unwrap(), &corr).unwrap();
            let b =
                absorption_rate(&Geometry::balanced(10.0, 10.0, dx + 0.25).unwrap(), &corr).unwrap();
            assert!((a - b).abs() < 1e-9 * corr.u0().norm_sqr());
            assert!((a - balanced_absorption_rate(&corr, dx)).abs() < 1e-9 * corr.u0().norm_sqr());
        }
    }

    #[test]
    fn intensity_is_flat() {
        let corr = default_corr();
        let g0 = Geometry::balanced(3.0, 3.0, 0.0).unwrap();
        assert_eq!(intensity(&g0, corr.crystal(), corr.spectrum(), corr.grid()), 1.0);
        for k in 0..50 {
            let g = Geometry::balanced(3.0, 3.0, -2.0 + 0.08 * k as f64).unwrap();
            let i = intensity(&g, corr.crystal(), corr.spectrum(), corr.grid());
            assert!((i - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn scan_validation() {
        let corr = default_corr();
        let g = Geometry::balanced(3.0, 3.0, 0.0).unwrap();
        let pump = PumpEnvelope::plane_wave();
        let err = fringe_scan(&g, &corr, &pump, (0.0, 0.5), 1).unwrap_err();
        assert!(err.to_string().contains("n_samples must be ≥ 2"));
        assert!(fringe_scan(&g, &corr, &pump, (0.5, 0.0), 10).is_err());
        let s = fringe_scan(&g, &corr, &pump, (0.0, 0.5), 11).unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(s[10].dx, 0.5);
        assert!(s.windows(2).all(|w| w[0].dx < w[1].dx));
    }

    #[test]
    fn visibility_definition() {
        assert_eq!(visibility(&[0.0, 1.0, 0.5]), 1.0);
        assert!((visibility(&[1.0, 3.0]) - 0.5).abs() < 1e-15);
        assert_eq!(visibility(&[0.0, 0.0]), 0.0);
        let corr = default_corr();
        let g = Geometry::balanced(10.0, 10.0, 0.0).unwrap();
        let v = fringe_visibility(&g, &corr, &PumpEnvelope::plane_wave(), 64).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_peak_of_pure_tone() {
        let n = 256;
        let d = 0.01;
        let values: Vec<f64> = (0..n).map(|k| (std::f64::consts::TAU * 12.5 * k as f64 * d).cos()).collect();
        let p = dominant_frequency(&values, d).unwrap();
        assert!((p.frequency - 12.5).abs() <= p.bin_width);
        assert!(dominant_frequency(&values[..3], d).is_err());
    }

    #[test]
    fn classical_reference() {
        assert_eq!(classical_fringe(0.0), 1.0);
        assert!(classical_fringe(0.25) < 1e-30);
        assert!((OMEGA0 - K0).abs() == 0.0);
    }
}
