//! Brute-force ground truth on a discrete mode grid.
//!
//! The pair state is Σ_j c_j a†(ν_j) b†(−ν_j)|0⟩ with c_j = h(ν_j)·w_j, the
//! continuous δ-pairing becoming a Kronecker pairing of node j with its
//! mirror node. The field at the substrate is
//!
//! E⁺ = Σ_k f(ν_k) [a(ν_k)(t_a + r_a)(ν_k) + b(ν_k)(t_b + r_b)(ν_k)]
//!
//! with the four path coefficients of [`field_coefficients`]. The oracle
//! applies annihilation operators term by term using [a(m), a†(p)] = δ_mp,
//! [b(m), b†(q)] = δ_mq and [a, b†] = 0. It never uses the correlation
//! function or the reduced amplitude formula.
//!
//! Because every basis state holds exactly one photon per channel,
//! E⁺E⁺|Ψ⟩ is a scalar times |0⟩ and E⁺|Ψ⟩ is a one-photon vector, so no
//! Fock tensor is materialized.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{CorrelationFunction, FrequencyGrid};
use crate::error::{Error, Result};
use crate::interferometer::{
    field_coefficients, intensity, two_photon_amplitude, Geometry, PathAmplitudes,
};
use crate::spectra::{NonlinearCrystal, SignalSpectrum, K0};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    A,
    B,
}

/// A discrete mode: channel plus grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mode {
    pub channel: Channel,
    pub node: usize,
}

/// One term c·a†(p)b†(q)|0⟩ of the pair state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerm {
    pub first: Mode,
    pub second: Mode,
    pub coeff: C64,
}

/// Discretized two-photon state; coefficients are left unnormalized.
#[derive(Debug, Clone)]
pub struct DiscreteModeState {
    grid: FrequencyGrid,
    terms: Vec<PairTerm>,
}

impl DiscreteModeState {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn terms(&self) -> &[PairTerm] {
        &self.terms
    }

    /// c_j for the term whose channel-a photon sits on node j.
    pub fn coeff(&self, j: usize) -> C64 {
        self.terms[j].coeff
    }

    /// Σ|c_j|²
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm_sqr()).sum()
    }

    /// Photon count per channel of every term.
    pub fn photons_per_channel(&self) -> (usize, usize) {
        let count = |t: &PairTerm, ch| [t.first, t.second].iter().filter(|m| m.channel == ch).count();
        self.terms.iter().fold((0, 0), |acc, t| {
            (acc.0.max(count(t, Channel::A)), acc.1.max(count(t, Channel::B)))
        })
    }
}

/// Pair state of a crystal on `grid`: c_j = h(ν_j)·w_j, a on node j, b on
/// the mirror node.
pub fn build_state(crystal: &NonlinearCrystal, grid: &FrequencyGrid) -> DiscreteModeState {
    let terms = (0..grid.n_points())
        .map(|j| PairTerm {
            first: Mode {
                channel: Channel::A,
                node: j,
            },
            second: Mode {
                channel: Channel::B,
                node: grid.partner(j),
            },
            coeff: crystal.phase_matching(grid.node(j)) * grid.weight(j),
        })
        .collect();
    DiscreteModeState { grid: *grid, terms }
}

/// Which output arm a path coefficient leads to, and whether the photon was
/// transmitted there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathLabel {
    pub transmitted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTerm {
    pub label: PathLabel,
    pub weight: C64,
}

/// Field operator at the substrate: per node and channel, the two path
/// terms f(ν)·coefficient.
#[derive(Debug, Clone)]
pub struct FieldExpansion {
    grid: FrequencyGrid,
    a: Vec<[PathTerm; 2]>,
    b: Vec<[PathTerm; 2]>,
}

impl FieldExpansion {
    pub fn new(geom: &Geometry, spectrum: &SignalSpectrum, grid: &FrequencyGrid) -> Self {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for nu in grid.nodes() {
            let f = spectrum.amplitude(nu);
            let c = field_coefficients(geom, nu);
            let term = |transmitted, w: C64| PathTerm {
                label: PathLabel { transmitted },
                weight: w * f,
            };
            a.push([term(true, c.a_to_x2), term(false, c.a_to_x1)]);
            b.push([term(true, c.b_to_x1), term(false, c.b_to_x2)]);
        }
        Self { grid: *grid, a, b }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn terms(&self, mode: Mode) -> &[PathTerm; 2] {
        match mode.channel {
            Channel::A => &self.a[mode.node],
            Channel::B => &self.b[mode.node],
        }
    }

    /// α(ν_j) = Σ paths of channel a at node j (includes f).
    pub fn alpha(&self, j: usize) -> C64 {
        self.a[j][0].weight + self.a[j][1].weight
    }

    /// β(ν_j) = Σ paths of channel b at node j (includes f).
    pub fn beta(&self, j: usize) -> C64 {
        self.b[j][0].weight + self.b[j][1].weight
    }
}

/// Number of accumulated products by the channels of the two annihilators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContributionLedger {
    pub ab: usize,
    pub ba: usize,
    pub aa: usize,
    pub bb: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleAmplitude {
    pub total: C64,
    pub paths: PathAmplitudes,
    pub ledger: ContributionLedger,
}

fn check_grids(state: &DiscreteModeState, field: &FieldExpansion) -> Result<()> {
    if state.grid != field.grid {
        return Err(Error::GridMismatch {
            state: state.grid.n_points(),
            field: field.grid.n_points(),
        });
    }
    Ok(())
}

/// ⟨0|E⁺E⁺|Ψ⟩ by explicit operator algebra.
///
/// For a term a†(p)b†(q)|0⟩ the product E⁺E⁺ contributes through both
/// orderings: a(p) then b(q), and b(q) then a(p). Each annihilator may act
/// through either of its two paths, giving the four path classes:
/// (a) both transmitted, (b) both reflected, (c) a transmitted/b reflected,
/// (d) a reflected/b transmitted. Products a·a or b·b annihilate the
/// one-photon-per-channel state and are never accumulated.
pub fn amplitude_oracle(state: &DiscreteModeState, field: &FieldExpansion) -> Result<OracleAmplitude> {
    check_grids(state, field)?;
    let mut paths = PathAmplitudes::default();
    let mut ledger = ContributionLedger::default();
    for term in &state.terms {
        let orderings = [(term.first, term.second), (term.second, term.first)];
        for (outer, inner) in orderings {
            // inner acts first on a†(p)b†(q)|0⟩ and removes its own photon;
            // outer then removes the remaining one.
            for ti in field.terms(inner) {
                for to in field.terms(outer) {
                    let product = term.coeff * ti.weight * to.weight;
                    match (outer.channel, inner.channel) {
                        (Channel::A, Channel::B) => ledger.ab += 1,
                        (Channel::B, Channel::A) => ledger.ba += 1,
                        (Channel::A, Channel::A) => ledger.aa += 1,
                        (Channel::B, Channel::B) => ledger.bb += 1,
                    }
                    let (a_term, b_term) = if inner.channel == Channel::A { (ti, to) } else { (to, ti) };
                    let slot = match (a_term.label.transmitted, b_term.label.transmitted) {
                        (true, true) => &mut paths.both_transmitted,
                        (false, false) => &mut paths.both_reflected,
                        (true, false) => &mut paths.transmitted_reflected,
                        (false, true) => &mut paths.reflected_transmitted,
                    };
                    *slot += product;
                }
            }
        }
    }
    Ok(OracleAmplitude {
        total: paths.total(),
        paths,
        ledger,
    })
}

/// E⁺|Ψ⟩ as a one-photon vector indexed by channel·n + node
/// (channel a = 0, b = 1).
pub fn one_photon_state(state: &DiscreteModeState, field: &FieldExpansion) -> Result<Vec<C64>> {
    check_grids(state, field)?;
    let n = state.grid.n_points();
    let index = |m: Mode| match m.channel {
        Channel::A => m.node,
        Channel::B => n + m.node,
    };
    let mut out = vec![C64::new(0.0, 0.0); 2 * n];
    for term in &state.terms {
        // annihilating one photon leaves the other one
        for (gone, left) in [(term.first, term.second), (term.second, term.first)] {
            let w: C64 = field.terms(gone).iter().map(|t| t.weight).sum();
            out[index(left)] += term.coeff * w;
        }
    }
    Ok(out)
}

/// Σ_j |c_j|² Σ_paths |w|²: the intensity with all interference removed.
fn incoherent_reference(state: &DiscreteModeState, field: &FieldExpansion, ports: &[Channel]) -> f64 {
    state
        .terms
        .iter()
        .map(|t| {
            let path_power = |m: Mode| field.terms(m).iter().map(|p| p.weight.norm_sqr()).sum::<f64>();
            let modes = [t.first, t.second];
            let sum: f64 = modes
                .iter()
                .filter(|m| ports.contains(&m.channel))
                .map(|&m| path_power(m))
                .sum();
            t.coeff.norm_sqr() * sum
        })
        .sum()
}

/// ⟨Ψ|E⁻E⁺|Ψ⟩ normalized by its incoherent path sum, so the unmodulated
/// background is 1.
pub fn intensity_oracle(state: &DiscreteModeState, field: &FieldExpansion) -> Result<f64> {
    let v = one_photon_state(state, field)?;
    let norm: C64 = v.iter().map(|z| z.conj() * z).sum();
    Ok(norm.re / incoherent_reference(state, field, &[Channel::A, Channel::B]))
}

/// Normalized intensity from the photon that entered through one input
/// channel only; the other channel's field is blocked.
pub fn port_intensity(state: &DiscreteModeState, field: &FieldExpansion, port: Channel) -> Result<f64> {
    check_grids(state, field)?;
    let mut total = 0.0;
    for term in &state.terms {
        let m = if term.first.channel == port { term.first } else { term.second };
        let w: C64 = field.terms(m).iter().map(|t| t.weight).sum();
        total += (term.coeff * w).norm_sqr();
    }
    Ok(total / incoherent_reference(state, field, &[port]))
}

/// The oracle's internal correlation sum Σ_j c_j f(ν_j) f(−ν_j) e^{iν_j z},
/// which is the same trapezoid sum as [`CorrelationFunction::evaluate`] on
/// this grid (without walk-off compensation).
pub fn correlation_sum(state: &DiscreteModeState, spectrum: &SignalSpectrum, z: f64) -> C64 {
    let g = &state.grid;
    state
        .terms
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let nu = g.node(j);
            t.coeff * (spectrum.amplitude(nu) * spectrum.amplitude(g.node(g.partner(j)))) * C64::cis(nu * z)
        })
        .sum()
}

/// Source and grid shared by the oracle and the analytic route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub crystal: NonlinearCrystal,
    pub spectrum: SignalSpectrum,
    pub grid: FrequencyGrid,
    /// Grid of the Fock state; must equal `grid` or the comparison fails
    /// with [`Error::GridMismatch`].
    pub state_grid: FrequencyGrid,
}

impl OracleConfig {
    pub fn new(crystal: NonlinearCrystal, spectrum: SignalSpectrum, grid: FrequencyGrid) -> Self {
        Self {
            crystal,
            spectrum,
            grid,
            state_grid: grid,
        }
    }
}

impl Default for OracleConfig {
    /// Type II (L = 125 λ₀, D = 0.057), Gaussian σ = 0.05ω₀, 1024 nodes to 8σ.
    fn default() -> Self {
        let spectrum = SignalSpectrum::default();
        let crystal = NonlinearCrystal::type_ii(125.0, 0.057).expect("valid default crystal");
        let grid = FrequencyGrid::for_spectrum(&spectrum, 1024, 8.0).expect("valid default grid");
        Self::new(crystal, spectrum, grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// max |A_oracle − A_analytic| / (2|u(0)|)
    pub max_amp_reldiff: f64,
    /// max |I_oracle − I_analytic| (both normalized to a unit background)
    pub max_int_reldiff: f64,
    /// max over the four paths of |path_oracle − path_analytic| / (2|u(0)|)
    pub max_path_reldiff: f64,
    /// a·a and b·b products accumulated by the oracle; always zero
    pub same_channel_products: usize,
    pub n_evaluations: usize,
}

/// Runs the oracle and the analytic formulas over every geometry with the
/// substrate point moved to each of `dx_samples`.
///
/// The analytic side uses the walk-off-compensated correlation function;
/// the oracle sees the compensating delay line as extra path length.
pub fn compare_with_analytic(
    config: &OracleConfig,
    geometries: &[Geometry],
    dx_samples: &[f64],
) -> Result<ComparisonReport> {
    let state = build_state(&config.crystal, &config.state_grid);
    let corr = CorrelationFunction::new(config.crystal, config.spectrum, config.grid)?;
    let scale = 2.0 * corr.u0().norm();
    let delay = corr.walkoff_delay();

    let jobs: Vec<Geometry> = geometries
        .iter()
        .flat_map(|g| dx_samples.iter().map(move |&dx| g.with_dx(dx)))
        .collect::<Result<_>>()?;

    let rows = jobs
        .par_iter()
        .map(|geom| {
            let field = FieldExpansion::new(&geom.with_delay_line(delay), &config.spectrum, &config.grid);
            let oracle = amplitude_oracle(&state, &field)?;
            let analytic = two_photon_amplitude(geom, &corr)?;
            let analytic_paths = crate::interferometer::path_amplitudes(
                geom,
                crate::interferometer::Illumination::Broadband(&corr),
            )?;
            let i_oracle = intensity_oracle(&state, &field)?;
            let i_analytic = intensity(geom, &config.crystal, &config.spectrum, &config.grid);
            let p = &oracle.paths;
            let q = &analytic_paths;
            let path_diff = [
                p.both_transmitted - q.both_transmitted,
                p.both_reflected - q.both_reflected,
                p.transmitted_reflected - q.transmitted_reflected,
                p.reflected_transmitted - q.reflected_transmitted,
            ]
            .iter()
            .map(|d| d.norm())
            .fold(0.0, f64::max);
            Ok((
                (oracle.total - analytic).norm() / scale,
                (i_oracle - i_analytic).abs(),
                path_diff / scale,
                oracle.ledger.aa + oracle.ledger.bb,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(rows.iter().fold(
        ComparisonReport {
            max_amp_reldiff: 0.0,
            max_int_reldiff: 0.0,
            max_path_reldiff: 0.0,
            same_channel_products: 0,
            n_evaluations: rows.len(),
        },
        |r, &(a, i, p, s)| ComparisonReport {
            max_amp_reldiff: r.max_amp_reldiff.max(a),
            max_int_reldiff: r.max_int_reldiff.max(i),
            max_path_reldiff: r.max_path_reldiff.max(p),
            same_channel_products: r.same_channel_products + s,
            n_evaluations: r.n_evaluations,
        },
    ))
}

/// Plane-wave reference for the oracle: single node, expected |A| at Δl = 0
/// is 2|cos(2k₀Δx)|.
pub fn plane_wave_fringe(dx: f64) -> f64 {
    2.0 * (2.0 * K0 * dx).cos().abs()
}
