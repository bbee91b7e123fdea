//! Spherical trigonometry in 3-space: inner angles, excess area, lune
//! measures, and an independent L'Huilier solid-angle oracle.
//!
//! The two area routes share no intermediate quantities: the excess path goes
//! through tangent-plane inner angles, while L'Huilier works from side arc
//! lengths alone. Their agreement is the crate's primary self-check.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};
use crate::linalg;

/// Vertex-matrix determinant below which a triangle counts as coplanar.
pub const TRIANGLE_DET_TOL: f64 = 1e-10;

/// Three linearly independent unit vectors on the sphere.
#[derive(Clone, Debug)]
pub struct SphericalTriangle {
    vertices: [UnitVector; 3],
}

impl SphericalTriangle {
    /// Build a triangle, rejecting (near-)coplanar vertex triples.
    pub fn new(v1: UnitVector, v2: UnitVector, v3: UnitVector) -> Result<Self> {
        let det = vertex_det(&v1, &v2, &v3);
        if det.abs() < TRIANGLE_DET_TOL {
            return Err(Error::DegenerateTriangle { det });
        }
        Ok(Self { vertices: [v1, v2, v3] })
    }

    pub fn from_coords(v1: &[f64], v2: &[f64], v3: &[f64]) -> Result<Self> {
        Self::new(
            UnitVector::from_coords(v1)?,
            UnitVector::from_coords(v2)?,
            UnitVector::from_coords(v3)?,
        )
    }

    pub fn vertices(&self) -> &[UnitVector; 3] {
        &self.vertices
    }
}

fn vertex_det(v1: &UnitVector, v2: &UnitVector, v3: &UnitVector) -> f64 {
    let m = [v1[0], v1[1], v1[2], v2[0], v2[1], v2[2], v3[0], v3[1], v3[2]];
    linalg::det(&m, 3)
}

/// Inner angles of a spherical triangle, each in (0, pi).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerAngles {
    theta: [f64; 3],
}

impl InnerAngles {
    pub fn new(theta: [f64; 3]) -> Result<Self> {
        for t in theta {
            if !(t > 0.0 && t < PI) {
                return Err(Error::AngleOutOfRange { value: t, low: 0.0, high: PI });
            }
        }
        let sum: f64 = theta.iter().sum();
        if !(sum > PI && sum < 3.0 * PI) {
            return Err(Error::AngleOutOfRange { value: sum, low: PI, high: 3.0 * PI });
        }
        Ok(Self { theta })
    }

    pub fn angles(&self) -> [f64; 3] {
        self.theta
    }

    pub fn sum(&self) -> f64 {
        self.theta.iter().sum()
    }
}

/// Angle at `apex` between the tangent-plane projections of `a` and `b`.
///
/// This is the dihedral angle of the cone edge through `apex`, measured
/// without any orientation convention.
pub(crate) fn tangent_angle(apex: &UnitVector, a: &UnitVector, b: &UnitVector) -> f64 {
    let wa = a.sub(&apex.scale(a.dot(apex)));
    let wb = b.sub(&apex.scale(b.dot(apex)));
    angle_between(&wa, &wb)
}

fn angle_between(a: &Vector, b: &Vector) -> f64 {
    // atan2 form is stable near 0 and pi, unlike plain acos of the cosine.
    let cross = a.cross3(b).norm();
    let dot = a.dot(b);
    cross.atan2(dot)
}

/// Inner angles via tangent-plane projection at each vertex.
pub fn inner_angles(t: &SphericalTriangle) -> InnerAngles {
    let [v1, v2, v3] = t.vertices();
    let theta = [tangent_angle(v1, v2, v3), tangent_angle(v2, v1, v3), tangent_angle(v3, v1, v2)];
    // The triangle invariant keeps every angle strictly inside (0, pi).
    InnerAngles { theta }
}

/// Spherical excess: `theta_1 + theta_2 + theta_3 - pi`, the triangle's area
/// on the unit sphere in steradians.
pub fn excess_area(a: &InnerAngles) -> f64 {
    a.sum() - PI
}

/// Solid angle of the triangle by L'Huilier's theorem, from side arc lengths
/// only:
///
/// `E = 4 atan sqrt( tan(s/2) tan((s-a)/2) tan((s-b)/2) tan((s-c)/2) )`
///
/// with `s` the semiperimeter. Independent oracle for the excess route.
pub fn lhuilier_solid_angle(t: &SphericalTriangle) -> Result<f64> {
    let [v1, v2, v3] = t.vertices();
    let a = arc_length(v2, v3);
    let b = arc_length(v1, v3);
    let c = arc_length(v1, v2);
    let s = 0.5 * (a + b + c);

    let mut product = 1.0;
    for half in [s / 2.0, (s - a) / 2.0, (s - b) / 2.0, (s - c) / 2.0] {
        let t = half.tan();
        if t < -1e-12 {
            return Err(Error::NumericalDegeneracy { value: t });
        }
        product *= t.max(0.0);
    }
    Ok(4.0 * product.sqrt().atan())
}

fn arc_length(a: &UnitVector, b: &UnitVector) -> f64 {
    // Stable form of acos(a . b).
    a.cross3(b).norm().atan2(a.dot(b))
}

/// Solid angle of the lune swept by an edge with dihedral angle `theta`:
/// `2 theta` steradians.
pub fn edge_lune_measure(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::AngleOutOfRange { value: theta, low: 0.0, high: PI });
    }
    Ok(2.0 * theta)
}
