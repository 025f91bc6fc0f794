//! Resolution bookkeeping around the two-photon fringe: multi-photon
//! diffraction narrowing, fringe periods of intensity powers, down-conversion
//! versus hyper-parametric phase matching, the χ⁽²⁾/χ⁽³⁾ efficiency
//! crossover, and the photon order inferred from exposure thresholds.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Process {
    /// χ⁽²⁾: one pump photon → signal + idler
    Spdc,
    /// χ⁽³⁾: two pump photons → signal + idler
    Hps,
}

impl Process {
    /// Pump photons consumed per pair.
    pub fn pump_photons(&self) -> f64 {
        match self {
            Process::Spdc => 1.0,
            Process::Hps => 2.0,
        }
    }
}

/// A plane wave: wavevector and angular frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub k: [f64; 3],
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatchCase {
    pub process: Process,
    pub pump: Wave,
    pub signal: Wave,
    pub idler: Wave,
}

impl PhaseMatchCase {
    pub fn new(process: Process, pump: Wave, signal: Wave, idler: Wave) -> Result<Self> {
        for (name, w) in [("pump", pump), ("signal", signal), ("idler", idler)] {
            if !(w.omega.is_finite() && w.omega > 0.0) {
                return Err(invalid(name, format!("frequency must be positive, got {}", w.omega)));
            }
        }
        Ok(Self {
            process,
            pump,
            signal,
            idler,
        })
    }

    /// Collinear degenerate split of a pump: each output photon carries
    /// (pump photons per pair)/2 of the pump's k and ω.
    pub fn degenerate_collinear(process: Process, pump: Wave) -> Result<Self> {
        let s = 0.5 * process.pump_photons();
        let half = Wave {
            k: pump.k.map(|c| s * c),
            omega: s * pump.omega,
        };
        Self::new(process, pump, half, half)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatchResidual {
    pub momentum: [f64; 3],
    pub energy: f64,
}

/// SPDC: k_p − k_s − k_i, ω_p − ω_s − ω_i.
/// HPS: 2k_p − k_s − k_i, 2ω_p − ω_s − ω_i.
pub fn phase_match_residual(case: &PhaseMatchCase) -> PhaseMatchResidual {
    let n = case.process.pump_photons();
    let mut momentum = [0.0; 3];
    for (i, m) in momentum.iter_mut().enumerate() {
        *m = n * case.pump.k[i] - case.signal.k[i] - case.idler.k[i];
    }
    PhaseMatchResidual {
        momentum,
        energy: n * case.pump.omega - case.signal.omega - case.idler.omega,
    }
}

/// Wavelength of each photon of a degenerate pair: twice the pump
/// wavelength for SPDC, equal to it for HPS.
pub fn degenerate_output_wavelength(process: Process, pump_wavelength: f64) -> Result<f64> {
    if !(pump_wavelength.is_finite() && pump_wavelength > 0.0) {
        return Err(invalid(
            "pump_wavelength",
            format!("must be positive, got {pump_wavelength}"),
        ));
    }
    Ok(2.0 * pump_wavelength / process.pump_photons())
}

/// Two-photon fringe period for a degenerate source: the output wavelength
/// divided by 4 (period λ/4 in the substrate coordinate).
pub fn two_photon_fringe_period(process: Process, pump_wavelength: f64) -> Result<f64> {
    Ok(degenerate_output_wavelength(process, pump_wavelength)? / 4.0)
}

/// A positive quantity written as mantissa × 10^exponent.
///
/// Susceptibilities are quoted as orders of magnitude in CGS units; keeping
/// the decimal exponent separate makes ratios of such values exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scientific {
    pub mantissa: f64,
    pub exponent: i32,
}

impl Scientific {
    pub const fn new(mantissa: f64, exponent: i32) -> Self {
        Self { mantissa, exponent }
    }

    /// Parses "1e-8", "2.5E3" or plain decimals.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || invalid("scientific", format!("cannot parse `{s}` as a number"));
        let (m, e) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let mantissa: f64 = m.parse().map_err(|_| bad())?;
        if !mantissa.is_finite() {
            return Err(bad());
        }
        Ok(Self::new(mantissa, e))
    }

    pub fn value(&self) -> f64 {
        scale_pow10(self.mantissa, self.exponent)
    }
}

fn scale_pow10(x: f64, exponent: i32) -> f64 {
    // 10^k is exact in f64 for k ≤ 22, so one correctly rounded operation
    if exponent.unsigned_abs() <= 22 {
        let p = 10f64.powi(exponent.abs());
        if exponent >= 0 {
            x * p
        } else {
            x / p
        }
    } else {
        x * 10f64.powi(exponent)
    }
}

/// Second- and third-order susceptibilities, CGS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Susceptibilities {
    /// (CGS field)⁻¹
    pub chi2: Scientific,
    /// (CGS field)⁻²
    pub chi3: Scientific,
}

impl Susceptibilities {
    pub fn new(chi2: Scientific, chi3: Scientific) -> Result<Self> {
        if chi2.mantissa.is_nan() || chi2.mantissa <= 0.0 {
            return Err(invalid("chi2", "χ⁽²⁾ must be positive"));
        }
        if chi3.mantissa < 0.0 {
            return Err(invalid("chi3", "χ⁽³⁾ must be non-negative"));
        }
        Ok(Self { chi2, chi3 })
    }

    /// Typical values: χ⁽²⁾ = 10⁻⁸, χ⁽³⁾ = 10⁻¹⁵.
    pub fn typical() -> Self {
        Self {
            chi2: Scientific::new(1.0, -8),
            chi3: Scientific::new(1.0, -15),
        }
    }
}

/// Pump field (CGS) at which |E_p χ⁽²⁾| = |χ⁽³⁾|, i.e. χ⁽³⁾/χ⁽²⁾.
pub fn efficiency_crossover_field(s: &Susceptibilities) -> f64 {
    scale_pow10(s.chi3.mantissa / s.chi2.mantissa, s.chi3.exponent - s.chi2.exponent)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffractionWidth {
    pub order: u32,
    /// x* with sinc^{2n}(x*) = 1/2
    pub half_width: f64,
    /// 2x*
    pub fwhm: f64,
    /// fwhm(n)/fwhm(1)
    pub narrowing_vs_order1: f64,
    /// |sinc^{2n}(x*) − 1/2|
    pub residual: f64,
}

fn half_width(order: u32) -> f64 {
    let g = |x: f64| sinc(x).powi(2 * order as i32) - 0.5;
    // g(0⁺) = 1/2 > 0, g(π) = −1/2 < 0 and g is monotone on (0, π)
    let (mut lo, mut hi) = (0.0_f64, PI);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Full width at half maximum of the n-photon diffraction pattern
/// sinc^{2n}(x), by bisection on (0, π) to machine precision.
pub fn diffraction_fwhm(order: u32) -> Result<DiffractionWidth> {
    if order == 0 {
        return Err(invalid("order", "photon order must be ≥ 1"));
    }
    let x = half_width(order);
    let x1 = if order == 1 { x } else { half_width(1) };
    Ok(DiffractionWidth {
        order,
        half_width: x,
        fwhm: 2.0 * x,
        narrowing_vs_order1: x / x1,
        residual: (sinc(x).powi(2 * order as i32) - 0.5).abs(),
    })
}

/// Period of sin^{2n}(kx): π/k for every n.
pub fn fringe_period(power: u32, k: f64) -> Result<f64> {
    if power == 0 {
        return Err(invalid("power", "intensity power must be ≥ 1"));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(invalid("k", format!("wavenumber must be positive, got {k}")));
    }
    Ok(PI / k)
}

/// Exposure to the photo-initiation threshold at a fixed intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExposurePoint {
    /// W/cm²
    pub intensity: f64,
    /// s
    pub threshold_time: f64,
}

impl ExposurePoint {
    pub fn new(intensity: f64, threshold_time: f64) -> Result<Self> {
        if !(intensity.is_finite() && intensity > 0.0) {
            return Err(invalid("intensity", format!("must be positive, got {intensity}")));
        }
        if !(threshold_time.is_finite() && threshold_time > 0.0) {
            return Err(invalid(
                "threshold_time",
                format!("must be positive, got {threshold_time}"),
            ));
        }
        Ok(Self {
            intensity,
            threshold_time,
        })
    }

    /// Point reached at `intensity` (W/cm²) for a threshold `dose` (J/cm²).
    pub fn from_dose(intensity: f64, dose: f64) -> Result<Self> {
        Self::new(intensity, dose / intensity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOrder {
    pub first: usize,
    pub second: usize,
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureFit {
    /// Mean of the pairwise estimates.
    pub order: f64,
    pub per_pair: Vec<PairOrder>,
}

/// Photon order n of the exposure law Iⁿt = const.
///
/// For a pair of points, I₁ⁿt₁ = I₂ⁿt₂ gives n = ln(t₁/t₂)/ln(I₂/I₁). Every
/// pair i < j is estimated and the estimates are averaged.
pub fn exposure_order(points: &[ExposurePoint]) -> Result<ExposureFit> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput(
            "at least two exposure points are required".into(),
        ));
    }
    let mut per_pair = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (p, q) = (points[i], points[j]);
            if p.intensity == q.intensity {
                return Err(Error::DegenerateInput(format!(
                    "points {i} and {j} have equal intensity {}",
                    p.intensity
                )));
            }
            let order = (p.threshold_time / q.threshold_time).ln() / (q.intensity / p.intensity).ln();
            per_pair.push(PairOrder {
                first: i,
                second: j,
                order,
            });
        }
    }
    let order = per_pair.iter().map(|p| p.order).sum::<f64>() / per_pair.len() as f64;
    Ok(ExposureFit { order, per_pair })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave(k: f64, omega: f64) -> Wave {
        Wave {
            k: [0.0, 0.0, k],
            omega,
        }
    }

    #[test]
    fn degenerate_cases_are_matched() {
        for p in [Process::Spdc, Process::Hps] {
            let c = PhaseMatchCase::degenerate_collinear(p, wave(3.0, 5.0)).unwrap();
            let r = phase_match_residual(&c);
            assert_eq!(r.momentum, [0.0; 3]);
            assert_eq!(r.energy, 0.0);
        }
        let hps = PhaseMatchCase::degenerate_collinear(Process::Hps, wave(3.0, 5.0)).unwrap();
        assert_eq!(hps.signal.omega, 5.0);
    }

    #[test]
    fn energy_violation() {
        let c = PhaseMatchCase::new(Process::Spdc, wave(2.0, 4.0), wave(1.0, 4.0), wave(1.0, 1.5)).unwrap();
        assert_eq!(phase_match_residual(&c).energy, -1.5);
        assert!(PhaseMatchCase::new(Process::Spdc, wave(1.0, 0.0), wave(1.0, 1.0), wave(1.0, 1.0)).is_err());
    }

    #[test]
    fn output_wavelengths() {
        assert_eq!(degenerate_output_wavelength(Process::Spdc, 400e-9).unwrap(), 800e-9);
        assert_eq!(degenerate_output_wavelength(Process::Hps, 400e-9).unwrap(), 400e-9);
        // SPDC plus two-photon detection: λ_out/4 = λ_p/2, the classical
        // half-wavelength limit at the pump wavelength
        let period = two_photon_fringe_period(Process::Spdc, 400e-9).unwrap();
        assert_eq!(period, 400e-9 / 2.0);
        assert!(degenerate_output_wavelength(Process::Hps, 0.0).is_err());
    }

    #[test]
    fn crossover_field() {
        assert_eq!(efficiency_crossover_field(&Susceptibilities::typical()), 1e-7);
        let zero = Susceptibilities::new(Scientific::new(1.0, -8), Scientific::new(0.0, -15)).unwrap();
        assert_eq!(efficiency_crossover_field(&zero), 0.0);
        let double = Susceptibilities::new(Scientific::new(1.0, -8), Scientific::new(2.0, -15)).unwrap();
        assert_eq!(efficiency_crossover_field(&double), 2e-7);
        assert!(Susceptibilities::new(Scientific::new(0.0, 0), Scientific::new(1.0, 0)).is_err());
    }

    #[test]
    fn scientific_parsing() {
        assert_eq!(Scientific::parse("1e-8").unwrap(), Scientific::new(1.0, -8));
        assert_eq!(Scientific::parse("2.5E3").unwrap().value(), 2500.0);
        assert_eq!(Scientific::parse("0.1").unwrap(), Scientific::new(0.1, 0));
        assert!(Scientific::parse("abc").is_err());
        assert!(Scientific::parse("1e").is_err());
    }

    #[test]
    fn fwhm_values() {
        // reference half-widths from a 30-digit root finder
        let w1 = diffraction_fwhm(1).unwrap();
        assert!((w1.half_width - 1.391_557_378_251_510_2).abs() < 1e-12);
        assert!(w1.residual < 1e-12);
        assert_eq!(w1.narrowing_vs_order1, 1.0);
        let w2 = diffraction_fwhm(2).unwrap();
        assert!((w2.narrowing_vs_order1 - 0.719_989_253_303_734_3).abs() < 1e-12);
        assert!((w2.narrowing_vs_order1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.05 * std::f64::consts::FRAC_1_SQRT_2);
        let mut last = w1.fwhm;
        for n in 2..12 {
            let w = diffraction_fwhm(n).unwrap();
            assert!(w.fwhm < last);
            assert!(w.residual < 1e-12, "n = {n}: {}", w.residual);
            last = w.fwhm;
        }
        assert!(diffraction_fwhm(0).is_err());
    }

    #[test]
    fn fringe_period_is_power_invariant() {
        let tau = std::f64::consts::TAU;
        assert_eq!(fringe_period(1, tau).unwrap(), 0.5);
        assert_eq!(fringe_period(2, tau).unwrap(), 0.5);
        for n in 1..10 {
            assert_eq!(fringe_period(n, 3.3).unwrap(), fringe_period(1, 3.3).unwrap());
        }
        assert!(fringe_period(1, 0.0).is_err());
    }

    #[test]
    fn exposure_orders() {
        let measured = [
            ExposurePoint::from_dose(5.0, 2000.0).unwrap(),
            ExposurePoint::new(25.0, 80.0).unwrap(),
        ];
        assert_eq!(measured[0].threshold_time, 400.0);
        assert_eq!(exposure_order(&measured).unwrap().order, 1.0);

        let quad = [ExposurePoint::new(3.0, 10.0).unwrap(), ExposurePoint::new(6.0, 2.5).unwrap()];
        assert!((exposure_order(&quad).unwrap().order - 2.0).abs() < 1e-15);

        let e = std::f64::consts::E;
        let lin = [ExposurePoint::new(2.0, 7.0).unwrap(), ExposurePoint::new(2.0 * e, 7.0 / e).unwrap()];
        assert!((exposure_order(&lin).unwrap().order - 1.0).abs() < 1e-15);

        let three = [
            ExposurePoint::new(1.0, 100.0).unwrap(),
            ExposurePoint::new(2.0, 50.0).unwrap(),
            ExposurePoint::new(4.0, 25.0).unwrap(),
        ];
        let fit = exposure_order(&three).unwrap();
        assert_eq!(fit.per_pair.len(), 3);
        assert!((fit.order - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exposure_errors() {
        let p = ExposurePoint::new(5.0, 1.0).unwrap();
        assert!(matches!(exposure_order(&[p]), Err(Error::DegenerateInput(_))));
        assert!(matches!(exposure_order(&[p, p]), Err(Error::DegenerateInput(_))));
        assert!(ExposurePoint::new(0.0, 1.0).is_err());
    }
}
