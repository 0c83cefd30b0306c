//! Two-path interference of the arm propagators and the resistance map.
//!
//! The wave splits evenly at the entry junction; the upper arm carries the
//! phase +φ/2 and the lower −φ/2 (only the difference is observable), so the
//! recombined amplitude is
//!
//!   A = ½ (e^{+iφ/2} U_upper + e^{−iφ/2} U_lower),
//!
//! a sub-unitary mixture of unitaries. For unpolarized carriers the
//! transmission is T = ½·tr(A†A) ∈ [0, 1], and Ohm's law with a constant
//! bias maps it to R = R0/T, clamped at T = 1e-6 so perfect destructive
//! interference keeps traces finite.

use crate::error::Result;
use crate::fields::{ab_flux, ab_phase, ArmPath};
use crate::model::{Mode, RingConfig, SweepConfig};
use crate::spin::{propagate_exact, SpinMatrix, SpinPropagator, C64};
use rayon::prelude::*;

/// Clamp floor for the resistance map.
pub const TRANSMISSION_FLOOR: f64 = 1e-6;

/// Recombined two-path amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPathAmplitude {
    pub matrix: SpinMatrix,
}

impl TwoPathAmplitude {
    /// Largest singular value; ≤ 1 for any mixture of unitaries.
    pub fn spectral_norm(&self) -> f64 {
        SpinPropagator { matrix: self.matrix }.spectral_norm()
    }
}

/// One row of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionPoint {
    pub b: f64,
    pub transmission: f64,
    pub resistance: f64,
}

/// Transmission/resistance sampled over a uniform field grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub points: Vec<TransmissionPoint>,
}

impl Trace {
    pub fn b_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.b).collect()
    }

    pub fn transmissions(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.transmission).collect()
    }

    pub fn resistances(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.resistance).collect()
    }
}

/// Both arm propagators for a given applied field.
pub fn arm_propagators(b: f64, config: &RingConfig) -> Result<(SpinPropagator, SpinPropagator)> {
    let upper = propagate_exact(&ArmPath::upper(), b, config, config.spin_steps)?;
    let lower = propagate_exact(&ArmPath::lower(), b, config, config.spin_steps)?;
    Ok((upper, lower))
}

/// ½(e^{+iφ/2}·U_upper + e^{−iφ/2}·U_lower).
pub fn combine_arms(
    phase: f64,
    upper: &SpinPropagator,
    lower: &SpinPropagator,
) -> TwoPathAmplitude {
    let up = C64::from_polar(0.5, 0.5 * phase);
    let lo = C64::from_polar(0.5, -0.5 * phase);
    TwoPathAmplitude {
        matrix: upper.matrix * up + lower.matrix * lo,
    }
}

/// Two-path amplitude at field `b`, with the spin sector evaluated at `b`.
///
/// In flux-only sweeps the spin sector is instead frozen at the sweep's
/// reference field; [`trace_sweep`] handles that by combining frozen
/// propagators through [`combine_arms`].
pub fn two_path_amplitude(b: f64, config: &RingConfig) -> Result<TwoPathAmplitude> {
    let (upper, lower) = arm_propagators(b, config)?;
    Ok(combine_arms(ab_phase(ab_flux(b, config)), &upper, &lower))
}

/// Unpolarized transmission T = ½·tr(A†A), the mean of ‖A·χ‖² over any
/// orthonormal spinor pair.
pub fn transmission_unpolarized(amplitude: &TwoPathAmplitude) -> f64 {
    let m = amplitude.matrix;
    0.5 * m.iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// R = R0 / max(T, 1e-6).
pub fn resistance(transmission: f64, config: &RingConfig) -> f64 {
    config.resistance_scale / transmission.max(TRANSMISSION_FLOOR)
}

/// Sample the sweep grid. Samples are independent and evaluated in
/// parallel; the output order always matches the grid.
pub fn trace_sweep(sweep: &SweepConfig, config: &RingConfig) -> Result<Trace> {
    let frozen = match config.mode {
        Mode::FluxOnly => Some(arm_propagators(sweep.b_ref(), config)?),
        Mode::Physical => None,
    };
    let points = (0..sweep.n_samples)
        .into_par_iter()
        .map(|k| -> Result<TransmissionPoint> {
            let b = sweep.sample(k);
            let amplitude = match &frozen {
                Some((upper, lower)) => {
                    combine_arms(ab_phase(ab_flux(b, config)), upper, lower)
                }
                None => two_path_amplitude(b, config)?,
            };
            let transmission = transmission_unpolarized(&amplitude);
            Ok(TransmissionPoint {
                b,
                transmission,
                resistance: resistance(transmission, config),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace { points })
}
