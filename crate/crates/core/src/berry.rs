//! Solid angles of curves on the direction sphere and the phases they carry.
//!
//! An arm's effective field traces a curve of unit directions. A spin branch
//! pinned to that direction acquires, beyond its dynamical phase, a geometric
//! phase of ∓half the solid angle the curve subtends — for an open curve,
//! after closing it with the great-circle geodesic between its endpoints.
//! The unpolarized ensemble averages the two branch phase factors to
//! cos(Ω/2), a visibility factor rather than a phase.
//!
//! The solid angle is the signed spherical area from a triangle fan rooted at
//! the curve's normalized mean point, each triangle contributing
//! 2·atan2(a·(b×c), 1 + a·b + b·c + c·a). Fanning from the centroid is robust
//! for the latitude-like curves this geometry produces, and independent test
//! oracles (Girard angle sums) check it.

use crate::error::{Error, Result};
use crate::fields::{effective_field, ArmPath};
use crate::model::{RingConfig, Vec3};
use crate::spin::FIELD_FLOOR;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// An ordered sequence of unit directions; closed curves wrap implicitly
/// from the last point back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCurve {
    points: Vec<Vec3>,
    closed: bool,
    closure_arc: f64,
}

impl SphericalCurve {
    /// Validate and take ownership of an open curve.
    pub fn open(points: Vec<Vec3>) -> Result<Self> {
        Self::build(points, false)
    }

    /// Validate a curve whose last→first edge is part of the boundary.
    pub fn closed(points: Vec<Vec3>) -> Result<Self> {
        Self::build(points, true)
    }

    fn build(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        for (index, p) in points.iter().enumerate() {
            let norm = p.norm();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NonUnitPoint { index, norm });
            }
        }
        let last_edge = if closed { points.len() } else { points.len() - 1 };
        for index in 0..last_edge {
            let next = (index + 1) % points.len();
            if angular_gap(&points[index], &points[next]) >= std::f64::consts::PI - 1e-6 {
                return Err(Error::AntipodalStep { index, next });
            }
        }
        Ok(SphericalCurve {
            points,
            closed,
            closure_arc: 0.0,
        })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Length of the geodesic appended by [`geodesic_close`]; 0 for curves
    /// closed as built.
    pub fn closure_arc(&self) -> f64 {
        self.closure_arc
    }

    /// Mean edge length in radians.
    pub fn mean_step(&self) -> f64 {
        let n_edges = if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        };
        let total: f64 = (0..n_edges)
            .map(|i| angular_gap(&self.points[i], &self.points[(i + 1) % self.points.len()]))
            .sum();
        total / n_edges as f64
    }
}

fn angular_gap(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos()
}

/// Spherical linear interpolation between unit vectors, t ∈ [0, 1].
pub fn slerp(a: &Vec3, b: &Vec3, t: f64) -> Vec3 {
    let angle = angular_gap(a, b);
    if angle < 1e-15 {
        return *a;
    }
    let s = angle.sin();
    (((1.0 - t) * angle).sin() * a + (t * angle).sin() * b) / s
}

/// Signed solid angle with the closure length that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidAngleResult {
    /// Steradians, principal value in (−2π, 2π]; positive for
    /// counterclockwise traversal around the enclosed region.
    pub omega: f64,
    pub closure_arc_length: f64,
}

/// Unit directions of the effective field sampled uniformly in θ along the
/// arm (endpoints included). Open curve.
pub fn field_curve(
    path: &ArmPath,
    b: f64,
    config: &RingConfig,
    n_points: usize,
) -> Result<SphericalCurve> {
    if n_points < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: n_points,
        });
    }
    let mut points = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let t = k as f64 / (n_points - 1) as f64;
        let field = effective_field(path.theta_at(t), path, b, config);
        let magnitude = field.norm();
        if magnitude < FIELD_FLOOR {
            return Err(Error::DegenerateField(magnitude));
        }
        points.push(field / magnitude);
    }
    SphericalCurve::open(points)
}

/// Append the minor great-circle arc from the last point back to the first,
/// sampled at the curve's mean angular density, and mark the curve closed.
///
/// Equal endpoints close at zero cost. Antipodal endpoints have no unique
/// geodesic; the caller must perturb its parameters.
pub fn geodesic_close(curve: SphericalCurve) -> Result<SphericalCurve> {
    if curve.closed {
        return Ok(curve);
    }
    let first = curve.points[0];
    let last = *curve.points.last().expect("validated curve is nonempty");
    let gap = angular_gap(&last, &first);
    if gap >= std::f64::consts::PI - 1e-6 {
        return Err(Error::AntipodalEndpoints);
    }
    let mut points = curve.points;
    if gap > 0.0 {
        let segments = (gap / curve_mean_step(&points)).ceil().max(1.0) as usize;
        for j in 1..segments {
            points.push(slerp(&last, &first, j as f64 / segments as f64));
        }
    }
    let mut closed = SphericalCurve::build(points, true)?;
    closed.closure_arc = gap;
    Ok(closed)
}

fn curve_mean_step(points: &[Vec3]) -> f64 {
    let total: f64 = points
        .windows(2)
        .map(|w| angular_gap(&w[0], &w[1]))
        .sum();
    total / (points.len() - 1) as f64
}

/// Signed spherical area enclosed by a closed curve.
///
/// Fans spherical triangles from the normalized mean point and sums their
/// signed areas via 2·atan2(a·(b×c), 1 + a·b + b·c + c·a), then reduces to
/// the principal value in (−2π, 2π].
pub fn solid_angle(curve: &SphericalCurve) -> Result<SolidAngleResult> {
    if !curve.closed {
        return Err(Error::OpenCurve);
    }
    if curve.points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: curve.points.len(),
        });
    }
    let mean: Vec3 = curve.points.iter().sum::<Vec3>() / curve.points.len() as f64;
    let norm = mean.norm();
    if norm < 1e-9 {
        return Err(Error::DegenerateCentroid(norm));
    }
    let apex = mean / norm;
    let n = curve.points.len();
    let mut omega = 0.0;
    for k in 0..n {
        omega += triangle_solid_angle(&apex, &curve.points[k], &curve.points[(k + 1) % n]);
    }
    Ok(SolidAngleResult {
        omega: principal_value(omega),
        closure_arc_length: curve.closure_arc,
    })
}

/// Signed solid angle of the spherical triangle (a, b, c); positive when the
/// vertices run counterclockwise seen from outside.
pub fn triangle_solid_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let numerator = a.dot(&b.cross(c));
    let denominator = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * numerator.atan2(denominator)
}

fn principal_value(omega: f64) -> f64 {
    let mut value = omega;
    while value > TWO_PI {
        value -= 2.0 * TWO_PI;
    }
    while value <= -TWO_PI {
        value += 2.0 * TWO_PI;
    }
    value
}

/// Geometric phase of one spin branch: γ = −branch·Ω/2.
pub fn berry_phase(omega: f64, branch: Branch) -> f64 {
    -branch.sign() * omega / 2.0
}

/// Spin branch relative to the field direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Aligned with 𝓑 (+1).
    Plus,
    /// Anti-aligned (−1).
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Unpolarized average of the two branch phase factors:
/// (e^{+iΩ/2} + e^{−iΩ/2})/2 = cos(Ω/2).
pub fn berry_average(omega: f64) -> f64 {
    (omega / 2.0).cos()
}
