//! Spin-dependent Aharonov-Bohm oscillations in a two-path mesoscopic ring.
//!
//! A carrier wave entering a ~1 μm ring splits over the two arms and
//! recombines at the exit. The enclosed flux shifts the relative phase by
//! 2πeΦ/h, so the transmission — and through Ohm's law the resistance —
//! oscillates with period h/e as the perpendicular field is swept. On top of
//! the orbital phase, the moving spin sees an effective field
//! 𝓑 = B − (λ/c²)v×E whose direction differs between the arms; the spin
//! phases it accumulates (dynamical and geometric) modulate the oscillation
//! and show up as satellites flanking the e/h line in the trace's power
//! spectrum.
//!
//! Module map:
//! - [`model`]: constants, configuration, derived quantities
//! - [`fields`]: enclosed flux, two-path phase, effective field along an arm
//! - [`spin`]: SU(2) propagators, exact and adiabatic arm transport
//! - [`berry`]: spherical curves, solid angles, non-cyclic geometric phases
//! - [`interference`]: two-path transmission and resistance sweeps
//! - [`spectrum`]: detrending, windowed power spectra, peak classification

pub mod berry;
pub mod error;
pub mod fields;
pub mod interference;
pub mod model;
pub mod spectrum;
pub mod spin;

pub use error::{Error, Result};
