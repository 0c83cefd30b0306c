//! Enclosed flux, the two-path phase, and the effective field 𝓑 along each
//! arm.
//!
//! The ring lies in the xy-plane with the entry junction at θ = π and the
//! exit at θ = 0. The upper arm runs θ: π → 0 through π/2 (angular direction
//! −1), the lower arm θ: π → 2π (direction +1). A carrier moving at v along
//! the arm in a perpendicular electric field E ẑ sees
//!
//!   𝓑 = B ẑ − (λ/c²) v × E = B ẑ − d·so·r̂(θ),
//!
//! where d = ±1 is the angular direction, so = λ v E/c² the in-plane field
//! magnitude in tesla, and r̂(θ) the outward radial unit vector. The applied
//! part is fixed along ẑ, the in-plane part is always radial, so |𝓑| =
//! √(B² + so²) everywhere; only the tilt direction moves.

use crate::model::{RingConfig, Vec3, CONSTANTS};

/// Which arm of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Upper,
    Lower,
}

/// One traversal of an arc of the ring at constant speed.
///
/// Canonical arms both start at the entry junction θ = π and end at the exit
/// θ = 0 (mod 2π), spanning |Δθ| = π. Custom arcs are allowed for composed
/// loops in tests and the `berry` CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmPath {
    pub arm: Arm,
    pub theta_start: f64,
    pub theta_end: f64,
    /// +1 counterclockwise (increasing θ), −1 clockwise.
    pub angular_direction: f64,
}

impl ArmPath {
    /// θ: π → 0 through π/2.
    pub fn upper() -> Self {
        ArmPath {
            arm: Arm::Upper,
            theta_start: std::f64::consts::PI,
            theta_end: 0.0,
            angular_direction: -1.0,
        }
    }

    /// θ: π → 2π through 3π/2.
    pub fn lower() -> Self {
        ArmPath {
            arm: Arm::Lower,
            theta_start: std::f64::consts::PI,
            theta_end: 2.0 * std::f64::consts::PI,
            angular_direction: 1.0,
        }
    }

    /// Angular extent |θ_end − θ_start|.
    pub fn span(&self) -> f64 {
        (self.theta_end - self.theta_start).abs()
    }

    /// θ at a fraction t ∈ [0, 1] of the traversal.
    pub fn theta_at(&self, t: f64) -> f64 {
        self.theta_start + self.angular_direction * self.span() * t
    }

    /// Traversal duration for this arc: arc length / speed.
    pub fn duration(&self, config: &RingConfig) -> f64 {
        self.span() * config.radius / config.fermi_velocity
    }
}

/// Enclosed magnetic flux (weber).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagneticFlux(pub f64);

/// Φ = B·πr² for a uniform field through the ring.
pub fn ab_flux(b: f64, config: &RingConfig) -> MagneticFlux {
    MagneticFlux(b * config.area())
}

/// Two-path phase shift 2π·e·Φ/h (signed).
pub fn ab_phase(flux: MagneticFlux) -> f64 {
    2.0 * std::f64::consts::PI * CONSTANTS.e * flux.0 / CONSTANTS.h
}

fn radial(theta: f64) -> Vec3 {
    Vec3::new(theta.cos(), theta.sin(), 0.0)
}

/// The field seen by the spin at angle θ on the given arm: applied B ẑ plus
/// the motional in-plane term −d·so·r̂(θ).
///
/// Pure geometry — mode handling (freezing the spin sector at a reference
/// field) lives in the sweep, which simply evaluates this at b_ref.
pub fn effective_field(theta: f64, path: &ArmPath, b: f64, config: &RingConfig) -> Vec3 {
    Vec3::new(0.0, 0.0, b) - config.so_field() * path.angular_direction * radial(theta)
}

/// |𝓑| = √(b² + so²), independent of position and arm.
pub fn field_magnitude(b: f64, config: &RingConfig) -> f64 {
    b.hypot(config.so_field())
}
