//! Two-photon interferometric lithography.
//!
//! A frequency-entangled photon pair from a down-converter is split on a
//! 50/50 beamsplitter and the two output beams counter-propagate onto a
//! two-photon sensitive substrate. This crate computes the resulting
//! absorption fringe, which oscillates with spatial frequency 4k₀ along the
//! substrate, and the single-photon intensity, which is flat.
//!
//! Every analytic result is cross-checked against [`fock_oracle`], which
//! evaluates the same vacuum matrix elements by explicit mode algebra on a
//! discrete frequency grid.
//!
//! Internal units: c = 1 and lengths are measured in the degenerate
//! wavelength λ₀, so k₀ = ω₀ = 2π. Conversions from SI live in
//! [`spectra::UnitSystem`].
//!
//! Modules:
//! - [`spectra`]: phase mismatch, phase-matching function, filter spectrum.
//! - [`correlation`]: the biphoton correlation function u(z) and the pump envelope.
//! - [`interferometer`]: geometry, beamsplitter, path amplitudes, fringes.
//! - [`fock_oracle`]: brute-force discrete-mode ground truth.
//! - [`resolution`]: diffraction narrowing, phase matching, exposure-order inference.

pub mod correlation;
pub mod error;
pub mod fock_oracle;
pub mod interferometer;
pub mod resolution;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
