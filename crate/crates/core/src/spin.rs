//! Spinor algebra and spin transport along an arm.
//!
//! The spin Hamiltonian is H = +(g/2)·μ_B·𝓑·σ. A step of duration Δt in a
//! field of magnitude |𝓑| along n̂ is the exact rotation
//!
//!   U = exp(−i·H·Δt/ħ) = cos(ωΔt/2)·I − i·sin(ωΔt/2)·(n̂·σ),
//!
//! with ω = g·μ_B·|𝓑|/ħ the precession rate. [`propagate_exact`] chains such
//! rotations over midpoint samples of the arm (second-order accurate, each
//! factor exactly unitary). [`propagate_adiabatic`] instead pins the two spin
//! branches to the local field direction, parallel-transports them, and
//! carries the dynamical phases ∓½∫ω dt; the phase its transport picks up
//! relative to the start, arg⟨±(0)|±_PT(T)⟩, is the non-cyclic geometric
//! phase of the traced field-direction curve closed by the geodesic.

use crate::error::{Error, Result};
use crate::fields::{effective_field, ArmPath};
use crate::model::{RingConfig, Vec3, CONSTANTS};

pub type C64 = nalgebra::Complex<f64>;
pub type SpinMatrix = nalgebra::Matrix2<C64>;

/// Fields below 1e-15 T have no usable eigenbasis.
pub const FIELD_FLOOR: f64 = 1e-15;

/// A normalized two-component spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor {
    pub up: C64,
    pub down: C64,
}

impl Spinor {
    pub fn new(up: C64, down: C64) -> Self {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        Spinor {
            up: up / norm,
            down: down / norm,
        }
    }

    pub fn spin_up() -> Self {
        Spinor {
            up: C64::new(1.0, 0.0),
            down: C64::new(0.0, 0.0),
        }
    }

    pub fn spin_down() -> Self {
        Spinor {
            up: C64::new(0.0, 0.0),
            down: C64::new(1.0, 0.0),
        }
    }

    /// Eigenstate of n̂·σ with eigenvalue +1. The chart is picked per
    /// hemisphere so the construction stays well-conditioned arbitrarily
    /// close to n̂ = −ẑ (no fixed global chart).
    pub fn aligned_with(n: Vec3) -> Self {
        if n.z >= 0.0 {
            Spinor::new(C64::new(1.0 + n.z, 0.0), C64::new(n.x, n.y))
        } else {
            Spinor::new(C64::new(n.x, -n.y), C64::new(1.0 - n.z, 0.0))
        }
    }

    /// The orthogonal state (eigenvalue −1 of the same n̂·σ).
    pub fn orthogonal(&self) -> Self {
        Spinor {
            up: -self.down.conj(),
            down: self.up.conj(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.up.norm_sqr() + self.down.norm_sqr()).sqrt()
    }

    pub fn inner(&self, other: &Spinor) -> C64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn as_vector(&self) -> nalgebra::Vector2<C64> {
        nalgebra::Vector2::new(self.up, self.down)
    }
}

/// n̂·σ for a (not necessarily unit) vector.
pub fn pauli_dot(v: Vec3) -> SpinMatrix {
    SpinMatrix::new(
        C64::new(v.z, 0.0),
        C64::new(v.x, -v.y),
        C64::new(v.x, v.y),
        C64::new(-v.z, 0.0),
    )
}

/// Accumulated spin evolution along an arm: a 2×2 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPropagator {
    pub matrix: SpinMatrix,
}

impl SpinPropagator {
    pub fn identity() -> Self {
        SpinPropagator {
            matrix: SpinMatrix::identity(),
        }
    }

    /// ‖U†U − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let residual = self.matrix.adjoint() * self.matrix - SpinMatrix::identity();
        residual.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> C64 {
        self.matrix.m11 * self.matrix.m22 - self.matrix.m12 * self.matrix.m21
    }

    pub fn adjoint(&self) -> Self {
        SpinPropagator {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `other` applied after `self`.
    pub fn then(&self, other: &SpinPropagator) -> Self {
        SpinPropagator {
            matrix: other.matrix * self.matrix,
        }
    }

    pub fn apply(&self, state: &Spinor) -> Spinor {
        let v = self.matrix * state.as_vector();
        Spinor { up: v[0], down: v[1] }
    }

    /// Largest singular value, from the eigenvalues of U†U.
    pub fn spectral_norm(&self) -> f64 {
        let m = self.matrix.adjoint() * self.matrix;
        let trace = (m.m11 + m.m22).re;
        let det = (m.m11 * m.m22 - m.m12 * m.m21).re;
        let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
        (0.5 * (trace + disc)).max(0.0).sqrt()
    }
}

/// exp(−i·(angle/2)·axis·σ): rotation of the spin by `angle` about `axis`.
pub fn su2_axis_angle(axis: Vec3, angle: f64) -> Result<SpinPropagator> {
    let norm = axis.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(rotation_unchecked(axis, angle))
}

fn rotation_unchecked(axis: Vec3, angle: f64) -> SpinPropagator {
    let c = (0.5 * angle).cos();
    let s = (0.5 * angle).sin();
    SpinPropagator {
        matrix: SpinMatrix::new(
            C64::new(c, -s * axis.z),
            C64::new(-s * axis.y, -s * axis.x),
            C64::new(s * axis.y, -s * axis.x),
            C64::new(c, s * axis.z),
        ),
    }
}

/// Precession rate g·μ_B·|𝓑|/ħ (signed through g).
fn precession_rate(g_factor: f64, magnitude: f64) -> f64 {
    g_factor * CONSTANTS.mu_b * magnitude / CONSTANTS.hbar
}

/// Constant-field propagator: rotation about ẑ by g·μ_B·b·duration/ħ.
pub fn zeeman_closed_form(b: f64, duration: f64, config: &RingConfig) -> SpinPropagator {
    let angle = precession_rate(config.g_factor, b) * duration;
    rotation_unchecked(Vec3::new(0.0, 0.0, 1.0), angle)
}

/// Time-ordered product of midpoint-sampled rotations along the arm.
///
/// Step k covers t ∈ [kΔt, (k+1)Δt] and uses the field at the step-center
/// angle; later steps multiply on the left. Error is O(1/n²); every factor
/// is an exact rotation, so unitarity never degrades with n.
pub fn propagate_exact(
    path: &ArmPath,
    b: f64,
    config: &RingConfig,
    n_steps: usize,
) -> Result<SpinPropagator> {
    if n_steps < 16 {
        return Err(Error::TooFewSteps(n_steps));
    }
    let dt = path.duration(config) / n_steps as f64;
    let mut u = SpinPropagator::identity();
    for k in 0..n_steps {
        let theta = path.theta_at((k as f64 + 0.5) / n_steps as f64);
        let field = effective_field(theta, path, b, config);
        let magnitude = field.norm();
        let step = if magnitude < FIELD_FLOOR {
            SpinPropagator::identity()
        } else {
            let angle = precession_rate(config.g_factor, magnitude) * dt;
            rotation_unchecked(field / magnitude, angle)
        };
        u = u.then(&step);
    }
    Ok(u)
}

/// Adiabatic transport of the two spin branches along an arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticResult {
    pub propagator: SpinPropagator,
    /// −½∫ω dt for the branch aligned with 𝓑.
    pub dynamical_phase_plus: f64,
    /// +½∫ω dt for the anti-aligned branch.
    pub dynamical_phase_minus: f64,
    /// arg⟨+(0)|+_PT(T)⟩: minus half the geodesic-closed solid angle of the
    /// field-direction curve.
    pub geometric_phase_plus: f64,
    pub geometric_phase_minus: f64,
}

/// Pin each branch to the local field direction and parallel-transport it.
///
/// Transport is the projector chain |ψ_{k+1}⟩ ∝ P(n̂_{k+1})|ψ_k⟩, which makes
/// every link's overlap real positive; the leftover endpoint phase is purely
/// geometric. The propagator is assembled from the transported frames and
/// the dynamical phases — the geometric phase already lives inside the
/// transported vectors and is reported, not reapplied.
///
/// Uses `config.spin_steps` transport steps. Fails with `DegenerateField`
/// if |𝓑| < 1e-15 T anywhere on the arm.
pub fn propagate_adiabatic(path: &ArmPath, b: f64, config: &RingConfig) -> Result<AdiabaticResult> {
    let n_steps = config.spin_steps;
    let dt = path.duration(config) / n_steps as f64;

    let field_at = |t: f64| -> Result<(Vec3, f64)> {
        let field = effective_field(path.theta_at(t), path, b, config);
        let magnitude = field.norm();
        if magnitude < FIELD_FLOOR {
            return Err(Error::DegenerateField(magnitude));
        }
        Ok((field / magnitude, magnitude))
    };

    let (n0, _) = field_at(0.0)?;
    let plus0 = Spinor::aligned_with(n0);
    let minus0 = plus0.orthogonal();
    let mut plus = plus0;
    let mut minus = minus0;
    let mut dynamical = 0.0;

    for k in 0..n_steps {
        let (_, magnitude) = field_at((k as f64 + 0.5) / n_steps as f64)?;
        dynamical += precession_rate(config.g_factor, magnitude) * dt;
        let (next, _) = field_at((k + 1) as f64 / n_steps as f64)?;
        plus = project_onto(next, &plus);
        minus = project_onto(-next, &minus);
    }

    let geometric_phase_plus = plus0.inner(&plus).arg();
    let geometric_phase_minus = minus0.inner(&minus).arg();
    let phase_plus = C64::from_polar(1.0, -0.5 * dynamical);
    let phase_minus = C64::from_polar(1.0, 0.5 * dynamical);

    let matrix = outer(&plus, &plus0) * phase_plus + outer(&minus, &minus0) * phase_minus;
    Ok(AdiabaticResult {
        propagator: SpinPropagator { matrix },
        dynamical_phase_plus: -0.5 * dynamical,
        dynamical_phase_minus: 0.5 * dynamical,
        geometric_phase_plus,
        geometric_phase_minus,
    })
}

/// Project onto the +1 eigenspace of n̂·σ and renormalize.
fn project_onto(n: Vec3, state: &Spinor) -> Spinor {
    let half = (pauli_dot(n) + SpinMatrix::identity()) * C64::new(0.5, 0.0);
    let v = half * state.as_vector();
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    Spinor {
        up: v[0] / norm,
        down: v[1] / norm,
    }
}

fn outer(ket: &Spinor, bra: &Spinor) -> SpinMatrix {
    SpinMatrix::new(
        ket.up * bra.up.conj(),
        ket.up * bra.down.conj(),
        ket.down * bra.up.conj(),
        ket.down * bra.down.conj(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SpinOrbitKnob;

    fn with_so(so: f64) -> RingConfig {
        RingConfig {
            spin_orbit: SpinOrbitKnob::SoField(so),
            ..RingConfig::default()
        }
    }

    fn max_abs_diff(a: &SpinMatrix, b: &SpinMatrix) -> f64 {
        (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    #[test]
    fn zero_angle_is_identity() {
        let u = su2_axis_angle(Z, 0.0).unwrap();
        assert_eq!(u.matrix, SpinMatrix::identity());
    }

    #[test]
    fn z_rotation_by_pi() {
        // exp(−iπσ_z/2) = diag(−i, +i)
        let u = su2_axis_angle(Z, std::f64::consts::PI).unwrap();
        let expected = SpinMatrix::new(
            C64::new(0.0, -1.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 1.0),
        );
        assert!(max_abs_diff(&u.matrix, &expected) <= 1e-15);
    }

    #[test]
    fn double_cover_periodicity() {
        let axis = Vec3::new(0.6, 0.0, 0.8);
        let two_pi = su2_axis_angle(axis, 2.0 * std::f64::consts::PI).unwrap();
        assert!(max_abs_diff(&two_pi.matrix, &(-SpinMatrix::identity())) <= 1e-15);
        let four_pi = su2_axis_angle(axis, 4.0 * std::f64::consts::PI).unwrap();
        assert!(max_abs_diff(&four_pi.matrix, &SpinMatrix::identity()) <= 1e-15);
    }

    #[test]
    fn non_unit_axis_rejected() {
        match su2_axis_angle(Vec3::new(0.0, 0.0, 2.0), 1.0) {
            Err(Error::NonUnitAxis(n)) => assert!((n - 2.0).abs() < 1e-12),
            other => panic!("expected NonUnitAxis, got {other:?}"),
        }
    }

    #[test]
    fn zeeman_examples() {
        let config = RingConfig::default();
        let identity = zeeman_closed_form(0.0, 1e-11, &config);
        assert_eq!(identity.matrix, SpinMatrix::identity());

        // duration chosen so the angle is exactly 2π → −I
        let omega = config.g_factor * CONSTANTS.mu_b * 0.5 / CONSTANTS.hbar;
        let duration = 2.0 * std::f64::consts::PI / omega;
        let flip = zeeman_closed_form(0.5, duration, &config);
        assert!(max_abs_diff(&flip.matrix, &(-SpinMatrix::identity())) <= 1e-12);

        // g=0.44, b=0.5 T, t=πr/v: angle from constants arithmetic
        let angle = omega * config.traversal_time();
        assert!(
            (angle - 0.30390228136353314).abs() <= 1e-13,
            "angle = {angle}"
        );
    }

    #[test]
    fn too_few_steps_rejected() {
        let config = with_so(0.0);
        assert_eq!(
            propagate_exact(&ArmPath::upper(), 0.1, &config, 8).unwrap_err(),
            Error::TooFewSteps(8)
        );
    }

    #[test]
    fn constant_field_matches_zeeman_closed_form() {
        let config = with_so(0.0);
        for path in [ArmPath::upper(), ArmPath::lower()] {
            let exact = propagate_exact(&path, 0.5, &config, 1024).unwrap();
            let closed = zeeman_closed_form(0.5, config.traversal_time(), &config);
            assert!(
                max_abs_diff(&exact.matrix, &closed.matrix) <= 1e-10,
                "deviation {}",
                max_abs_diff(&exact.matrix, &closed.matrix)
            );
        }
    }

    #[test]
    fn product_stays_unitary() {
        let config = with_so(0.3);
        let u = propagate_exact(&ArmPath::lower(), 0.4, &config, 4096).unwrap();
        assert!(u.unitarity_defect() <= 1e-12);
        assert!((u.determinant().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_so_field_commutes_with_sigma_z() {
        let config = with_so(0.0);
        let u = propagate_exact(&ArmPath::upper(), 0.35, &config, 256).unwrap();
        let sz = pauli_dot(Z);
        let comm = u.matrix * sz - sz * u.matrix;
        let norm = comm.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(norm <= 1e-10, "commutator norm {norm}");
    }

    #[test]
    fn reversed_negated_sequence_is_adjoint() {
        // The ordered product over a field sequence, reversed and with
        // negated angles, is the inverse of the original product.
        let config = with_so(0.2);
        let path = ArmPath::lower();
        let n = 64;
        let dt = path.duration(&config) / n as f64;
        let steps: Vec<(Vec3, f64)> = (0..n)
            .map(|k| {
                let theta = path.theta_at((k as f64 + 0.5) / n as f64);
                let f = effective_field(theta, &path, 0.3, &config);
                let mag = f.norm();
                (
                    f / mag,
                    config.g_factor * CONSTANTS.mu_b * mag / CONSTANTS.hbar * dt,
                )
            })
            .collect();
        let forward = steps.iter().fold(SpinPropagator::identity(), |u, (ax, an)| {
            u.then(&su2_axis_angle(*ax, *an).unwrap())
        });
        let backward = steps
            .iter()
            .rev()
            .fold(SpinPropagator::identity(), |u, (ax, an)| {
                u.then(&su2_axis_angle(*ax, -*an).unwrap())
            });
        assert!(max_abs_diff(&backward.matrix, &forward.adjoint().matrix) <= 1e-12);
    }

    #[test]
    fn adiabatic_reduces_to_zeeman_without_tilt() {
        let config = RingConfig {
            spin_steps: 512,
            ..with_so(0.0)
        };
        let result = propagate_adiabatic(&ArmPath::upper(), 0.4, &config).unwrap();
        let closed = zeeman_closed_form(0.4, config.traversal_time(), &config);
        assert!(max_abs_diff(&result.propagator.matrix, &closed.matrix) <= 1e-12);
        assert_eq!(result.geometric_phase_plus, 0.0);
        assert_eq!(result.geometric_phase_minus, 0.0);
    }

    #[test]
    fn adiabatic_branch_phases_equal_and_opposite() {
        let config = RingConfig {
            spin_steps: 1024,
            ..with_so(0.25)
        };
        let result = propagate_adiabatic(&ArmPath::lower(), 0.3, &config).unwrap();
        assert!(
            (result.geometric_phase_plus + result.geometric_phase_minus).abs() <= 1e-9,
            "γ+ = {}, γ− = {}",
            result.geometric_phase_plus,
            result.geometric_phase_minus
        );
        assert!(result.propagator.unitarity_defect() <= 1e-12);
    }

    #[test]
    fn adiabatic_geometric_phase_is_half_cap() {
        // A canonical arm's field curve is a latitude semicircle at tilt
        // α = atan(so/b); closed by the over-pole geodesic it encloses half
        // the polar cap, Ω = π(1−cos α), so γ± = ∓π(1−cos α)/2.
        let config = RingConfig {
            spin_steps: 4096,
            ..with_so(0.2)
        };
        let b = 0.5;
        let alpha = (config.so_field() / b).atan();
        let expected = -0.5 * std::f64::consts::PI * (1.0 - alpha.cos());
        let result = propagate_adiabatic(&ArmPath::lower(), b, &config).unwrap();
        assert!(
            (result.geometric_phase_plus - expected).abs() <= 1e-6,
            "γ+ = {}, expected {expected}",
            result.geometric_phase_plus
        );
    }

    #[test]
    fn degenerate_field_rejected() {
        let config = with_so(0.0);
        match propagate_adiabatic(&ArmPath::upper(), 0.0, &config) {
            Err(Error::DegenerateField(_)) => {}
            other => panic!("expected DegenerateField, got {other:?}"),
        }
    }

    #[test]
    fn aligned_spinor_is_eigenvector() {
        for n in [
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
            Vec3::new(1.0, 0.0, 0.0).normalize(),
            Vec3::new(0.3, -0.4, -0.86).normalize(),
        ] {
            let s = Spinor::aligned_with(n);
            let applied = pauli_dot(n) * s.as_vector();
            assert!((applied[0] - s.up).norm() <= 1e-14);
            assert!((applied[1] - s.down).norm() <= 1e-14);
            let o = s.orthogonal();
            assert!(s.inner(&o).norm() <= 1e-15);
            assert!((s.norm() - 1.0).abs() <= 1e-12);
        }
    }
}
