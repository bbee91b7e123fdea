//! Shared generators for the integration suites: random rotations, cones in
//! convex position, simplices, and convex polygons, all driven by the
//! crate's own deterministic sample streams.

#![allow(dead_code)]

use umbra::{unit_vector_at, Cone, SampleStream, SimplexN, UnitVector, Vector};

/// Deterministic uniform scalar in [0, 1) derived from a 2-D sphere sample.
pub fn uniform(seed: u64, index: u64) -> f64 {
    let u = unit_vector_at(seed, index, 2).unwrap();
    let phi = u[1].atan2(u[0]);
    (phi / std::f64::consts::TAU + 0.5).rem_euclid(1.0)
}

/// A uniformly random rotation of 3-space as an orthonormal frame.
pub struct Rotation {
    rows: [UnitVector; 3],
}

impl Rotation {
    pub fn from_stream(stream: &mut SampleStream) -> Self {
        loop {
            let v1 = stream.sample_unit_vector(3).unwrap();
            let v2 = stream.sample_unit_vector(3).unwrap();
            let w2 = v2.sub(&v1.scale(v2.dot(&v1)));
            if w2.norm() < 1e-6 {
                continue;
            }
            let b2 = w2.normalized().unwrap();
            let b3 = v1.cross3(&b2).normalized().unwrap();
            return Self { rows: [v1, b2, b3] };
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector::new(self.rows.iter().map(|r| r.dot(v)).collect()).unwrap()
    }

    pub fn apply_unit(&self, v: &UnitVector) -> UnitVector {
        self.apply(v.as_vector()).normalized().unwrap()
    }
}

/// Random 3-generator cone from independent sphere samples.
pub fn random_cone_k3(stream: &mut SampleStream) -> Cone {
    loop {
        let g: Vec<Vector> =
            (0..3).map(|_| stream.sample_unit_vector(3).unwrap().into_vector()).collect();
        if let Ok(cone) = Cone::new(&g) {
            return cone;
        }
    }
}

/// Random k-generator cone: directions scattered on a spherical cap around a
/// random axis, azimuths staggered so the input is already in cyclic order.
/// Occasional non-convex draws are rejected by construction.
pub fn random_cone(
    stream: &mut SampleStream,
    k: usize,
    scalar_seed: u64,
    counter: &mut u64,
) -> Cone {
    assert!(k >= 3);
    if k == 3 {
        return random_cone_k3(stream);
    }
    loop {
        let axis = stream.sample_unit_vector(3).unwrap();
        let basis = umbra::complement_basis(&axis).unwrap();
        let mut next = || {
            let v = uniform(scalar_seed, *counter);
            *counter += 1;
            v
        };
        let polar_max = 0.3 + 1.0 * next();
        let mut raw = Vec::with_capacity(k);
        for i in 0..k {
            let phi = std::f64::consts::TAU * (i as f64 + 0.2 + 0.6 * next()) / k as f64;
            let polar = polar_max * (0.6 + 0.4 * next());
            let dir = axis
                .scale(polar.cos())
                .add(&basis[0].scale(polar.sin() * phi.cos()))
                .add(&basis[1].scale(polar.sin() * phi.sin()));
            raw.push(dir);
        }
        if let Ok(cone) = Cone::new(&raw) {
            return cone;
        }
    }
}

/// Random n-simplex with vertices on the unit sphere.
pub fn random_simplex(stream: &mut SampleStream, n: usize) -> SimplexN {
    loop {
        let vertices: Vec<Vector> =
            (0..=n).map(|_| stream.sample_unit_vector(n).unwrap().into_vector()).collect();
        if let Ok(s) = SimplexN::new(vertices) {
            return s;
        }
    }
}

/// Random convex polygon: k points on an axis-scaled circle in cyclic order.
pub fn random_convex_polygon(scalar_seed: u64, counter: &mut u64, k: usize) -> Vec<Vector> {
    let mut next = || {
        let v = uniform(scalar_seed, *counter);
        *counter += 1;
        v
    };
    loop {
        let mut angles: Vec<f64> = (0..k).map(|_| std::f64::consts::TAU * next()).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(std::f64::consts::TAU + angles[0] - angles[k - 1], f64::min);
        if min_gap < 1e-2 {
            continue;
        }
        let (ax, ay) = (0.5 + 2.0 * next(), 0.5 + 2.0 * next());
        let (cx, cy) = (4.0 * next() - 2.0, 4.0 * next() - 2.0);
        return angles
            .into_iter()
            .map(|t| Vector::new(vec![cx + ax * t.cos(), cy + ay * t.sin()]).unwrap())
            .collect();
    }
}
