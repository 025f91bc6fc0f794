use serde::Serialize;

use qlitho::correlation::{symmetry_check, CorrelationFunction, FrequencyGrid};
use qlitho::fock_oracle::{compare_with_analytic, ComparisonReport, OracleConfig};
use qlitho::interferometer::{classical_fringe, dominant_frequency, fringe_scan, fringe_visibility};
use qlitho::resolution::{
    degenerate_output_wavelength, diffraction_fwhm, efficiency_crossover_field, exposure_order,
    phase_match_residual, two_photon_fringe_period, DiffractionWidth, ExposureFit, ExposurePoint,
    PhaseMatchCase, PhaseMatchResidual, Process, Scientific, Susceptibilities, Wave,
};
use qlitho::spectra::SPEED_OF_LIGHT;

use crate::config::{RunConfig, Setup};
use crate::output::Sink;
use crate::{CliError, ExposureArgs, FwhmArgs, PhasematchArgs};

#[derive(Serialize)]
struct Units {
    length: &'static str,
    spatial_frequency: &'static str,
    absorption: &'static str,
}

const UNITS: Units = Units {
    length: "nm",
    spatial_frequency: "cycles per reference wavelength λ₀ of Δx",
    absorption: "|A|² / 4|u(0)|²",
};

#[derive(Serialize)]
struct Sidecar<'a, S: Serialize> {
    command: &'static str,
    version: &'static str,
    units: &'a Units,
    config: &'a RunConfig,
    summary: S,
}

fn prepare(cfg: &RunConfig) -> Result<(Setup, CorrelationFunction), CliError> {
    let setup = cfg.setup()?;
    for w in &setup.warnings {
        eprintln!("warning: {w}");
    }
    let corr = CorrelationFunction::new(setup.crystal, setup.spectrum, setup.grid)?;
    Ok((setup, corr))
}

#[derive(Serialize)]
struct FringeSummary {
    fringe_frequency: f64,
    fft_peak_bin: usize,
    fft_bin_width: f64,
    classical_frequency: f64,
    frequency_ratio: f64,
    visibility: f64,
    max_intensity_deviation: f64,
    abs_u0: f64,
    walkoff_delay_nm: f64,
}

pub fn fringe(cfg: &RunConfig, out: &Sink) -> Result<(), CliError> {
    let (setup, corr) = prepare(cfg)?;
    let (lo, hi) = cfg.scan_range(&setup)?;
    let samples = fringe_scan(&setup.geometry, &corr, &setup.pump, (lo, hi), cfg.scan.n_samples)?;

    let norm = 4.0 * corr.u0().norm_sqr();
    let absorption: Vec<f64> = samples.iter().map(|s| s.absorption / norm).collect();
    let classical: Vec<f64> = samples.iter().map(|s| classical_fringe(s.dx)).collect();
    let spacing = (hi - lo) / (samples.len() - 1) as f64;
    let peak = dominant_frequency(&absorption, spacing)?;
    let classical_peak = dominant_frequency(&classical, spacing)?;
    let visibility = fringe_visibility(&setup.geometry.with_dx(lo)?, &corr, &setup.pump, 64)?;

    let summary = FringeSummary {
        fringe_frequency: peak.frequency,
        fft_peak_bin: peak.bin,
        fft_bin_width: peak.bin_width,
        classical_frequency: classical_peak.frequency,
        frequency_ratio: peak.frequency / classical_peak.frequency,
        visibility,
        max_intensity_deviation: samples.iter().map(|s| (s.intensity - 1.0).abs()).fold(0.0, f64::max),
        abs_u0: corr.u0().norm(),
        walkoff_delay_nm: setup.internal_to_nm(corr.walkoff_delay()),
    };
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .zip(&absorption)
        .map(|(s, &a)| vec![setup.internal_to_nm(s.dx), a, s.intensity])
        .collect();
    let doc = Sidecar {
        command: "fringe",
        version: env!("CARGO_PKG_VERSION"),
        units: &UNITS,
        config: cfg,
        summary,
    };
    out.table(&["dx", "absorption", "intensity"], &rows, &doc)
}

#[derive(Serialize)]
struct CorrelationSummary {
    re_u0: f64,
    im_u0: f64,
    max_imag_fraction: f64,
    max_even_violation: f64,
    walkoff_delay_nm: f64,
    coherence_length_nm: f64,
}

pub fn correlation(cfg: &RunConfig, out: &Sink) -> Result<(), CliError> {
    let (setup, corr) = prepare(cfg)?;
    let zs_nm = cfg.z_samples_nm()?;
    let zs: Vec<f64> = zs_nm.iter().map(|&z| setup.nm_to_internal(z)).collect();
    let table = corr.tabulate(&zs)?;
    let symmetry = symmetry_check(&corr, &zs)?;
    let u0 = corr.u0();
    let summary = CorrelationSummary {
        re_u0: u0.re,
        im_u0: u0.im,
        max_imag_fraction: symmetry.max_imag_fraction,
        max_even_violation: symmetry.max_even_violation,
        walkoff_delay_nm: setup.internal_to_nm(corr.walkoff_delay()),
        coherence_length_nm: setup.internal_to_nm(corr.coherence_length()),
    };
    let rows: Vec<Vec<f64>> = table
        .iter()
        .zip(&zs_nm)
        .map(|(s, &z)| vec![z, s.u.re, s.u.im, s.abs_normalized])
        .collect();
    let doc = Sidecar {
        command: "correlation",
        version: env!("CARGO_PKG_VERSION"),
        units: &UNITS,
        config: cfg,
        summary,
    };
    out.table(&["z", "re_u", "im_u", "abs_u_norm"], &rows, &doc)
}

#[derive(Serialize)]
struct OracleDoc<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    threshold: f64,
    pass: bool,
    report: ComparisonReport,
}

pub fn oracle(cfg: &RunConfig, out: &Sink) -> Result<(), CliError> {
    let setup = cfg.setup()?;
    for w in &setup.warnings {
        eprintln!("warning: {w}");
    }
    let (lo, hi) = cfg.scan_range(&setup)?;
    let n = cfg.oracle.dx_samples;
    if n == 0 {
        return Err(CliError::Config("oracle.dx_samples: dx_samples must be ≥ 1".into()));
    }
    let threshold = cfg.oracle.threshold;
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(CliError::Config(format!("oracle.threshold: must be positive, got {threshold}")));
    }
    let dxs: Vec<f64> = if n == 1 {
        vec![lo]
    } else {
        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
    };

    let mut oc = OracleConfig::new(setup.crystal, setup.spectrum, setup.grid);
    if let Some(nodes) = cfg.oracle.state_nodes {
        oc.state_grid = FrequencyGrid::for_spectrum(&setup.spectrum, nodes, cfg.grid.nu_max_sigma)?;
    }
    let report = compare_with_analytic(&oc, &[setup.geometry], &dxs)?;
    let worst = report.max_amp_reldiff.max(report.max_int_reldiff);
    let pass = worst <= threshold;
    out.report(&OracleDoc {
        command: "oracle",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        threshold,
        pass,
        report,
    })?;
    if pass {
        Ok(())
    } else {
        Err(CliError::GateFailed(format!(
            "max reldiff {worst:e} exceeds threshold {threshold:e}"
        )))
    }
}

#[derive(Serialize)]
struct ProcessReport {
    process: Process,
    output_wavelength_nm: f64,
    fringe_period_nm: f64,
    /// degenerate collinear split; k in rad/nm, ω in rad/fs
    phase_match_residual: PhaseMatchResidual,
}

#[derive(Serialize)]
struct PhasematchDoc {
    command: &'static str,
    pump_wavelength_nm: f64,
    spdc: ProcessReport,
    hps: ProcessReport,
    susceptibilities: Susceptibilities,
    crossover_field_cgs: f64,
}

fn process_report(process: Process, lambda_p: f64) -> Result<ProcessReport, CliError> {
    let k = std::f64::consts::TAU / lambda_p;
    // c in nm/fs
    let omega = k * SPEED_OF_LIGHT * 1e-6;
    let pump = Wave { k: [0.0, 0.0, k], omega };
    let case = PhaseMatchCase::degenerate_collinear(process, pump)?;
    Ok(ProcessReport {
        process,
        output_wavelength_nm: degenerate_output_wavelength(process, lambda_p)?,
        fringe_period_nm: two_photon_fringe_period(process, lambda_p)?,
        phase_match_residual: phase_match_residual(&case),
    })
}

pub fn phasematch(args: &PhasematchArgs, out: &Sink) -> Result<(), CliError> {
    let lambda_p = args.pump_wavelength_nm;
    let named = |flag: &str, e: qlitho::Error| CliError::Config(format!("--{flag}: {e}"));
    let chi2 = Scientific::parse(&args.chi2).map_err(|e| named("chi2", e))?;
    let chi3 = Scientific::parse(&args.chi3).map_err(|e| named("chi3", e))?;
    let s = Susceptibilities::new(chi2, chi3)?;
    let doc = PhasematchDoc {
        command: "phasematch",
        pump_wavelength_nm: lambda_p,
        spdc: process_report(Process::Spdc, lambda_p).map_err(|e| {
            CliError::Config(format!("--pump-wavelength-nm: {e}"))
        })?,
        hps: process_report(Process::Hps, lambda_p)?,
        susceptibilities: s,
        crossover_field_cgs: efficiency_crossover_field(&s),
    };
    out.report(&doc)
}

#[derive(Serialize)]
struct ExposureDoc {
    command: &'static str,
    points: Vec<ExposurePoint>,
    fit: ExposureFit,
}

pub fn parse_point(s: &str) -> Result<ExposurePoint, CliError> {
    let bad = |why: String| CliError::Config(format!("--point `{s}`: {why}"));
    let (i, t) = s.split_once(':').ok_or_else(|| bad("expected I:t".into()))?;
    let i: f64 = i.trim().parse().map_err(|e| bad(format!("intensity: {e}")))?;
    let t: f64 = t.trim().parse().map_err(|e| bad(format!("time: {e}")))?;
    ExposurePoint::new(i, t).map_err(|e| bad(e.to_string()))
}

pub fn exposure_fit(args: &ExposureArgs, out: &Sink) -> Result<(), CliError> {
    let points = args.points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>, _>>()?;
    let fit = exposure_order(&points)?;
    out.report(&ExposureDoc {
        command: "exposure-fit",
        points,
        fit,
    })
}

#[derive(Serialize)]
struct FwhmDoc {
    command: &'static str,
    width: DiffractionWidth,
}

pub fn fwhm(args: &FwhmArgs, out: &Sink) -> Result<(), CliError> {
    out.report(&FwhmDoc {
        command: "fwhm",
        width: diffraction_fwhm(args.order)?,
    })
}
