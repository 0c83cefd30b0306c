//! Cross-module checks: the geometric phase extracted from adiabatic
//! transport against the solid-angle machinery, the exact propagator against
//! its closed forms and convergence order, and the fan-from-centroid solid
//! angle against an independent Girard angle-sum oracle.

use spinring::berry::{self, Branch, SphericalCurve};
use spinring::fields::{Arm, ArmPath};
use spinring::model::{RingConfig, SpinOrbitKnob, Vec3, CONSTANTS};
use spinring::spin::{self, C64};

/// Independent solid-angle oracle: fan from the first vertex, edges
/// subdivided by slerp, each triangle summed via Girard's angle excess with
/// atan2-based vertex angles. Shares no code path with the implementation's
/// centroid fan.
mod girard {
    use spinring::berry::slerp;
    use spinring::model::Vec3;

    fn vertex_angle(at: &Vec3, toward_a: &Vec3, toward_b: &Vec3) -> f64 {
        let ta = toward_a - at * at.dot(toward_a);
        let tb = toward_b - at * at.dot(toward_b);
        ta.cross(&tb).norm().atan2(ta.dot(&tb))
    }

    fn signed_excess(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
        let excess =
            vertex_angle(a, b, c) + vertex_angle(b, c, a) + vertex_angle(c, a, b) - std::f64::consts::PI;
        if excess <= 0.0 {
            return 0.0;
        }
        let orientation = a.dot(&b.cross(c));
        if orientation >= 0.0 {
            excess
        } else {
            -excess
        }
    }

    /// Solid angle of the closed polygon through `points`, with every edge
    /// refined below `max_segment` radians.
    pub fn solid_angle(points: &[Vec3], max_segment: f64) -> f64 {
        let apex = points[0];
        let n = points.len();
        let mut omega = 0.0;
        for k in 0..n {
            let a = points[k];
            let b = points[(k + 1) % n];
            let gap = a.dot(&b).clamp(-1.0, 1.0).acos();
            let pieces = (gap / max_segment).ceil().max(1.0) as usize;
            let mut previous = a;
            for j in 1..=pieces {
                let current = slerp(&a, &b, j as f64 / pieces as f64);
                omega += signed_excess(&apex, &previous, &current);
                previous = current;
            }
        }
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut value = omega;
        while value > two_pi {
            value -= 2.0 * two_pi;
        }
        while value <= -two_pi {
            value += 2.0 * two_pi;
        }
        value
    }
}

fn ring(so: f64, spin_steps: usize) -> RingConfig {
    RingConfig {
        spin_orbit: SpinOrbitKnob::SoField(so),
        spin_steps,
        ..RingConfig::default()
    }
}

fn latitude(alpha: f64, n: usize, span: f64, closed: bool) -> Vec<Vec3> {
    (0..n)
        .map(|k| {
            let denom = if closed { n as f64 } else { (n - 1) as f64 };
            let az = span * k as f64 / denom;
            Vec3::new(alpha.sin() * az.cos(), alpha.sin() * az.sin(), alpha.cos())
        })
        .collect()
}

#[test]
fn girard_oracle_agrees_on_analytic_cases() {
    // octant: π/2
    let octant = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let omega = girard::solid_angle(&octant, 2e-3);
    assert!(
        (omega - std::f64::consts::FRAC_PI_2).abs() <= 1e-9,
        "octant oracle gave {omega}"
    );
    // latitude loop polygons at a few tilts
    for tilt_deg in [20.0_f64, 45.0, 70.0] {
        let alpha = tilt_deg.to_radians();
        let points = latitude(alpha, 4000, 2.0 * std::f64::consts::PI, true);
        let oracle = girard::solid_angle(&points, 2e-3);
        let cap = 2.0 * std::f64::consts::PI * (1.0 - alpha.cos());
        assert!(
            (oracle - cap).abs() <= 1e-6,
            "tilt {tilt_deg}: oracle {oracle} vs cap {cap}"
        );
    }
}

#[test]
fn solid_angle_matches_girard_oracle_on_closed_semicircle() {
    let alpha = 60f64.to_radians();
    let open = SphericalCurve::open(latitude(alpha, 10_000, std::f64::consts::PI, false)).unwrap();
    let closed = berry::geodesic_close(open).unwrap();
    let fan = berry::solid_angle(&closed).unwrap().omega;
    let oracle = girard::solid_angle(closed.points(), 5e-4);
    assert!(
        (fan - oracle).abs() <= 1e-6,
        "fan {fan} vs girard {oracle}"
    );
    // both sit on the analytic half-cap value π(1−cos 60°) = π/2
    let analytic = std::f64::consts::PI * (1.0 - alpha.cos());
    assert!((fan - analytic).abs() <= 1e-6);
    assert!((oracle - analytic).abs() <= 1e-6);
}

#[test]
fn adiabatic_geometric_phase_matches_berry_module() {
    // transport phase vs ∓½ × geodesic-closed solid angle of the same
    // field-direction samples
    for (b, so, path) in [
        (0.5, 0.2, ArmPath::lower()),
        (0.5, 0.2, ArmPath::upper()),
        (0.15, 0.35, ArmPath::lower()),
        (0.3, 0.1, ArmPath::upper()),
    ] {
        let config = ring(so, 4096);
        let result = spin::propagate_adiabatic(&path, b, &config).unwrap();
        let curve = berry::field_curve(&path, b, &config, config.spin_steps + 1).unwrap();
        let omega = berry::solid_angle(&berry::geodesic_close(curve).unwrap())
            .unwrap()
            .omega;
        let expected_plus = berry::berry_phase(omega, Branch::Plus);
        let expected_minus = berry::berry_phase(omega, Branch::Minus);
        assert!(
            (result.geometric_phase_plus - expected_plus).abs() <= 1e-6,
            "b={b}, so={so}, {:?}: transport {} vs −Ω/2 = {}",
            path.arm,
            result.geometric_phase_plus,
            expected_plus
        );
        assert!(
            (result.geometric_phase_minus - expected_minus).abs() <= 1e-6,
            "b={b}, so={so}, {:?}: transport {} vs +Ω/2 = {}",
            path.arm,
            result.geometric_phase_minus,
            expected_minus
        );
    }
}

#[test]
fn full_ring_loop_gives_cone_solid_angle() {
    // tilt α = atan(so/b) = 60°; a full counterclockwise loop of the ring
    // traces the whole tilted circle, so the cyclic geometric phase has
    // magnitude ½·2π(1−cos 60°) = π/2.
    let b = 0.1;
    let so = b * 60f64.to_radians().tan();
    let config = ring(so, 4096);
    let first_half = ArmPath::lower();
    let second_half = ArmPath {
        arm: Arm::Lower,
        theta_start: 0.0,
        theta_end: std::f64::consts::PI,
        angular_direction: 1.0,
    };

    // loop curve from the two half-circle field curves
    let n = 2048;
    let mut points = berry::field_curve(&first_half, b, &config, n).unwrap().points().to_vec();
    let continuation = berry::field_curve(&second_half, b, &config, n).unwrap();
    points.extend_from_slice(&continuation.points()[1..n - 1]);
    let loop_curve = SphericalCurve::closed(points).unwrap();
    let omega = berry::solid_angle(&loop_curve).unwrap().omega;
    let expected = std::f64::consts::PI; // 2π(1−cos 60°)
    assert!(
        (omega - expected).abs() <= 1e-6,
        "loop solid angle {omega} vs {expected}"
    );

    // per-arc geodesic closures run along the same over-pole geodesic in
    // opposite directions, so the branch geometric phases add to the cyclic
    // Berry phase −Ω/2.
    let leg1 = spin::propagate_adiabatic(&first_half, b, &config).unwrap();
    let leg2 = spin::propagate_adiabatic(&second_half, b, &config).unwrap();
    let total_plus = leg1.geometric_phase_plus + leg2.geometric_phase_plus;
    assert!(
        (total_plus - (-0.5 * expected)).abs() <= 1e-6,
        "composed geometric phase {total_plus} vs {}",
        -0.5 * expected
    );
}

#[test]
fn exact_propagator_richardson_ratio_is_second_order() {
    // deviation from a 2^14-step reference should shrink ≈4× per doubling
    let config = RingConfig {
        g_factor: 50.0,
        ..ring(0.1, 4096)
    };
    let b = 0.2;
    let path = ArmPath::lower();
    let reference = spin::propagate_exact(&path, b, &config, 1 << 14).unwrap();
    let deviation = |n: usize| {
        let u = spin::propagate_exact(&path, b, &config, n).unwrap();
        (u.matrix - reference.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    };
    let coarse = deviation(1 << 10);
    let fine = deviation(1 << 11);
    let ratio = coarse / fine;
    assert!(
        (3.2..=4.8).contains(&ratio),
        "convergence ratio {ratio} (errors {coarse} -> {fine})"
    );
}

#[test]
fn forced_adiabatic_regime_matches_exact_branch_phases() {
    // crank g so larmor/orbit ≳ 200; the exact propagator is the oracle
    let config = RingConfig {
        g_factor: 1000.0,
        ..ring(0.2, 8192)
    };
    let b = 0.5;
    let adiabaticity = spinring::model::derived(&config, b).adiabaticity;
    assert!(
        adiabaticity >= 200.0,
        "test setup: adiabaticity {adiabaticity} < 200"
    );

    let path = ArmPath::lower();
    let exact = spin::propagate_exact(&path, b, &config, 1 << 15).unwrap();
    let adiabatic = spin::propagate_adiabatic(&path, b, &config).unwrap();

    // branch amplitudes of U_ad† U_exact in the entry eigenbasis: unit
    // modulus and zero phase when the adiabatic picture is exact
    let entry_field = spinring::fields::effective_field(
        std::f64::consts::PI,
        &path,
        b,
        &config,
    );
    let plus = spin::Spinor::aligned_with(entry_field / entry_field.norm());
    let minus = plus.orthogonal();
    let product = adiabatic.propagator.matrix.adjoint() * exact.matrix;
    let amp = |s: &spin::Spinor| -> C64 {
        let v = product * s.as_vector();
        s.inner(&spin::Spinor { up: v[0], down: v[1] })
    };
    for (label, state) in [("plus", plus), ("minus", minus)] {
        let a = amp(&state);
        assert!(
            a.norm() >= 0.999,
            "{label}: branch mixing too strong, |amp| = {}",
            a.norm()
        );
        assert!(
            a.arg().abs() <= 0.05,
            "{label}: branch phase mismatch {} rad",
            a.arg()
        );
    }
}

#[test]
fn unitarity_defect_stays_tiny_at_ten_thousand_steps() {
    let config = ring(0.3, 4096);
    let u = spin::propagate_exact(&ArmPath::upper(), 0.4, &config, 10_000).unwrap();
    let defect = u.unitarity_defect();
    assert!(defect <= 1e-12, "unitarity defect {defect}");
    assert!((u.determinant().norm() - 1.0).abs() <= 1e-12);
}

#[test]
fn zeeman_angle_from_constants() {
    // ω·t for g=0.44, b=0.5 T, t=πr/v — frozen from constants arithmetic
    let config = RingConfig::default();
    let omega = config.g_factor * CONSTANTS.mu_b * 0.5 / CONSTANTS.hbar;
    let angle = omega * config.traversal_time();
    assert!((angle - 0.30390228136353314).abs() <= 1e-13);
}
