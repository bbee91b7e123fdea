//! Face lattices of convex polytopes, per-face solid angles, and the
//! alternating-sum identity over proper faces:
//! `sum_F (-1)^(dim F) alpha(F) = (-1)^(n-1) n omega_n`.
//!
//! Lattices are either auto-built for simplices or supplied explicitly and
//! validated against the facet half-spaces. Face angles come in two modes:
//! exact (facets in any dimension, everything in 2-D and 3-D) and Monte
//! Carlo (any face, via the active-facet direction oracle at the face
//! centroid).

use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::estimator::{estimate_solid_angle_at_point, EstimatorReport};
use crate::geom::{sphere_surface_area, UnitVector, Vector};
use crate::sample::sub_seed;
use crate::simplex::SimplexN;
use crate::spherical::edge_lune_measure;

/// Base slack under which a vertex counts as lying on a facet; scaled by
/// `1 + |offset|` to stay meaningful for distant hyperplanes.
pub const ACTIVE_SLACK_TOL: f64 = 1e-9;
/// Margin for the Monte Carlo direction oracle.
pub const FACE_ORACLE_EPS: f64 = 1e-9;

/// Half-space `normal . x >= offset` with inward unit normal.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: UnitVector,
    pub offset: f64,
}

impl Facet {
    fn slack(&self, point: &Vector) -> f64 {
        self.normal.dot(point) - self.offset
    }

    fn active_at(&self, point: &Vector) -> bool {
        self.slack(point).abs() < ACTIVE_SLACK_TOL * (1.0 + self.offset.abs())
    }
}

/// A proper face, recorded by dimension and sorted vertex index set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

/// Explicit face lattice of a convex polytope.
#[derive(Clone, Debug)]
pub struct PolytopeFaceLattice {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

/// How to evaluate per-face solid angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMode {
    Exact,
    MonteCarlo,
}

/// A face angle: exact value or Monte Carlo report.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "mode", content = "angle")]
pub enum FaceAngle {
    Exact(f64),
    Estimated(EstimatorReport),
}

impl FaceAngle {
    pub fn value(&self) -> f64 {
        match self {
            FaceAngle::Exact(v) => *v,
            FaceAngle::Estimated(r) => r.estimate,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            FaceAngle::Exact(_) => 0.0,
            FaceAngle::Estimated(r) => r.stderr,
        }
    }
}

/// One row of the alternating sum.
#[derive(Clone, Debug, Serialize)]
pub struct GramEulerEntry {
    pub face_dim: usize,
    pub vertices: Vec<usize>,
    #[serde(flatten)]
    pub angle: FaceAngle,
}

/// The alternating sum, its target, and the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct GramEulerReport {
    pub per_face_angles: Vec<GramEulerEntry>,
    pub alternating_sum: f64,
    pub combined_stderr: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct FacetRepr {
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<FacetRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Face>>,
}

impl PolytopeFaceLattice {
    /// Validate and adopt an explicit lattice.
    pub fn new(
        dim: usize,
        vertices: Vec<Vector>,
        facets: Vec<Facet>,
        faces: Vec<Face>,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { left: v.dim(), right: dim });
            }
        }
        if vertices.is_empty() || facets.is_empty() || faces.is_empty() {
            return Err(Error::InvalidLattice {
                reason: "vertices, facets and faces must be nonempty".into(),
            });
        }
        let lattice = Self { dim, vertices, facets, faces: normalize_faces(faces)? };
        lattice.validate()?;
        Ok(lattice)
    }

    /// The full proper-face lattice of a simplex: every nonempty vertex
    /// subset of size <= n, with facet half-spaces oriented toward the
    /// omitted vertex.
    pub fn build_simplex_lattice(simplex: &SimplexN) -> Result<Self> {
        let n = simplex.dim();
        let vertices = simplex.vertices().to_vec();
        let mut facets = Vec::with_capacity(n + 1);
        for omitted in 0..=n {
            let on_face: Vec<&Vector> =
                (0..=n).filter(|&j| j != omitted).map(|j| &vertices[j]).collect();
            let rows: Vec<Vec<f64>> =
                (1..n).map(|j| on_face[j].sub(on_face[0]).coords().to_vec()).collect();
            let raw = Vector::new(crate::linalg::orthogonal_complement(&rows, n))?;
            if raw.norm() < 1e-12 {
                return Err(Error::DegenerateSimplex { det: 0.0 });
            }
            let mut normal = raw.normalized()?;
            if normal.dot(&vertices[omitted].sub(on_face[0])) < 0.0 {
                normal = normal.negated();
            }
            let offset = normal.dot(on_face[0]);
            facets.push(Facet { normal, offset });
        }

        let mut faces = Vec::new();
        for mask in 1u32..(1 << (n + 1)) {
            let size = mask.count_ones() as usize;
            if size > n {
                continue;
            }
            let members: Vec<usize> = (0..=n).filter(|&j| mask & (1 << j) != 0).collect();
            faces.push(Face { dim: size - 1, vertices: members });
        }
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        Self::new(n, vertices, facets, faces)
    }

    /// Lattice of a convex polygon from its vertices in cyclic order.
    pub fn polygon(vertices: Vec<Vector>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidLattice {
                reason: format!("polygon needs >= 3 vertices, got {k}"),
            });
        }
        let mut centroid = Vector::zeros(2);
        for v in &vertices {
            centroid = centroid.add(v);
        }
        centroid = centroid.scale(1.0 / k as f64);
        let mut facets = Vec::with_capacity(k);
        let mut faces = Vec::with_capacity(2 * k);
        for i in 0..k {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % k];
            let d = b.sub(a);
            let mut normal = Vector::new(vec![-d[1], d[0]])?.normalized()?;
            if normal.dot(&centroid.sub(a)) < 0.0 {
                normal = normal.negated();
            }
            let offset = normal.dot(a);
            facets.push(Facet { normal, offset });
            let mut edge = vec![i, (i + 1) % k];
            edge.sort_unstable();
            faces.push(Face { dim: 1, vertices: edge });
        }
        for i in 0..k {
            faces.push(Face { dim: 0, vertices: vec![i] });
        }
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        Self::new(2, vertices, facets, faces)
    }

    /// Parse the lattice schema. `facets` and `faces` may be omitted
    /// together, in which case the vertices must form a simplex and the
    /// lattice is built automatically.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: LatticeRepr = serde_json::from_str(text)?;
        let vertices: Vec<Vector> =
            repr.vertices.iter().map(|v| Vector::from_slice(v)).collect::<Result<_>>()?;
        match (repr.facets, repr.faces) {
            (None, None) => {
                let simplex = SimplexN::new(vertices)?;
                Self::build_simplex_lattice(&simplex)
            }
            (Some(facets), Some(faces)) => {
                let facets = facets
                    .into_iter()
                    .map(|f| {
                        let raw = Vector::from_slice(&f.normal)?;
                        let len = raw.norm();
                        if len < 1e-300 {
                            return Err(Error::ZeroVector);
                        }
                        Ok(Facet { normal: raw.normalized()?, offset: f.offset / len })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(repr.dim, vertices, facets, faces)
            }
            _ => Err(Error::InvalidLattice {
                reason: "facets and faces must be provided together or both omitted".into(),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Number of faces per dimension 0..n-1.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    fn validate(&self) -> Result<()> {
        let n_vert = self.vertices.len();
        for (fi, facet) in self.facets.iter().enumerate() {
            if facet.normal.dim() != self.dim {
                return Err(Error::DimensionMismatch { left: facet.normal.dim(), right: self.dim });
            }
            for (vi, v) in self.vertices.iter().enumerate() {
                if facet.slack(v) < -ACTIVE_SLACK_TOL * (1.0 + facet.offset.abs()) {
                    return Err(Error::InvalidLattice {
                        reason: format!("vertex {vi} violates facet {fi}"),
                    });
                }
            }
        }
        let mut seen_zero_faces = vec![false; n_vert];
        for face in &self.faces {
            if face.dim >= self.dim {
                return Err(Error::InvalidLattice {
                    reason: format!(
                        "face of dimension {} is not proper in dimension {}",
                        face.dim, self.dim
                    ),
                });
            }
            if face.vertices.is_empty() {
                return Err(Error::InvalidLattice { reason: "empty face".into() });
            }
            if face.vertices.len() < face.dim + 1 {
                return Err(Error::InvalidLattice {
                    reason: format!(
                        "face {:?} has too few vertices for dimension {}",
                        face.vertices, face.dim
                    ),
                });
            }
            for &v in &face.vertices {
                if v >= n_vert {
                    return Err(Error::VertexIndexOutOfRange { index: v, count: n_vert });
                }
            }
            if face.dim == 0 {
                seen_zero_faces[face.vertices[0]] = true;
            }
            // the face's vertex set must be exactly the vertices on its
            // common supporting facets
            let active: Vec<usize> = (0..self.facets.len())
                .filter(|&f| {
                    face.vertices.iter().all(|&v| self.facets[f].active_at(&self.vertices[v]))
                })
                .collect();
            if active.is_empty() {
                return Err(Error::InvalidLattice {
                    reason: format!("face {:?} lies on no facet", face.vertices),
                });
            }
            let supported: Vec<usize> = (0..n_vert)
                .filter(|&v| active.iter().all(|&f| self.facets[f].active_at(&self.vertices[v])))
                .collect();
            if supported != face.vertices {
                return Err(Error::InvalidLattice {
                    reason: format!(
                        "face {:?} does not match the vertices {:?} on its supporting facets",
                        face.vertices, supported
                    ),
                });
            }
        }
        if !seen_zero_faces.iter().all(|&b| b) {
            return Err(Error::InvalidLattice {
                reason: "every vertex must appear as a 0-face".into(),
            });
        }
        // facets and (n-1)-faces must list the same vertex sets
        for (fi, facet) in self.facets.iter().enumerate() {
            let on_set: Vec<usize> =
                (0..n_vert).filter(|&v| facet.active_at(&self.vertices[v])).collect();
            let found = self.faces.iter().any(|f| f.dim == self.dim - 1 && f.vertices == on_set);
            if !found {
                return Err(Error::InvalidLattice {
                    reason: format!("facet {fi} has no matching (n-1)-face"),
                });
            }
        }
        for face in self.faces.iter().filter(|f| f.dim == self.dim - 1) {
            let matched = self.facets.iter().any(|facet| {
                let on_set: Vec<usize> =
                    (0..n_vert).filter(|&v| facet.active_at(&self.vertices[v])).collect();
                on_set == face.vertices
            });
            if !matched {
                return Err(Error::InvalidLattice {
                    reason: format!("(n-1)-face {:?} matches no facet", face.vertices),
                });
            }
        }
        Ok(())
    }

    fn centroid_of(&self, face: &Face) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for &v in &face.vertices {
            c = c.add(&self.vertices[v]);
        }
        c.scale(1.0 / face.vertices.len() as f64)
    }

    /// Solid angle of the polytope at (the relative interior of) a face.
    ///
    /// Monte Carlo mode samples directions at the face centroid and accepts
    /// those with non-negative slope against every active facet. Exact mode
    /// covers facets in any dimension, polygon vertices, and 3-D vertices
    /// (spherical polygon excess) and edges (lune of the dihedral angle).
    pub fn face_solid_angle(
        &self,
        face_index: usize,
        mode: AngleMode,
        n_samples: u64,
        seed: u64,
    ) -> Result<FaceAngle> {
        let face = self
            .faces
            .get(face_index)
            .ok_or(Error::FaceNotInLattice { index: face_index, count: self.faces.len() })?;
        match mode {
            AngleMode::MonteCarlo => {
                let centroid = self.centroid_of(face);
                let active: Vec<&Facet> =
                    self.facets.iter().filter(|f| f.active_at(&centroid)).collect();
                let oracle = move |u: &UnitVector| {
                    active.iter().all(|f| f.normal.dot(u) >= -FACE_ORACLE_EPS)
                };
                let report = estimate_solid_angle_at_point(oracle, self.dim, n_samples, seed)?;
                Ok(FaceAngle::Estimated(report))
            }
            AngleMode::Exact => self.exact_face_angle(face).map(FaceAngle::Exact),
        }
    }

    fn exact_face_angle(&self, face: &Face) -> Result<f64> {
        if face.dim == self.dim - 1 {
            // a facet sees exactly the half space of directions
            return Ok(sphere_surface_area(self.dim)? / 2.0);
        }
        match (self.dim, face.dim) {
            (2, 0) => {
                let v = face.vertices[0];
                let neighbors = self.edge_neighbors(v)?;
                let here = &self.vertices[v];
                let a = self.vertices[neighbors[0]].sub(here);
                let b = self.vertices[neighbors[1]].sub(here);
                // interior angle, stable at both ends of (0, pi)
                let cross = (a[0] * b[1] - a[1] * b[0]).abs();
                Ok(cross.atan2(a.dot(&b)))
            }
            (3, 0) => {
                let v = face.vertices[0];
                let here = &self.vertices[v];
                let dirs: Vec<Vector> = self
                    .edge_neighbors(v)?
                    .into_iter()
                    .map(|w| self.vertices[w].sub(here))
                    .collect();
                let cone = Cone::new(&dirs)?;
                Ok(cone.solid_angle_excess())
            }
            (3, 1) => {
                let centroid = self.centroid_of(face);
                let active: Vec<&Facet> =
                    self.facets.iter().filter(|f| f.active_at(&centroid)).collect();
                if active.len() != 2 {
                    return Err(Error::InvalidLattice {
                        reason: format!(
                            "edge {:?} is active on {} facets, expected 2",
                            face.vertices,
                            active.len()
                        ),
                    });
                }
                let n1 = &active[0].normal;
                let n2 = &active[1].normal;
                // inner dihedral angle between the two half-planes
                let theta = std::f64::consts::PI - n1.cross3(n2).norm().atan2(n1.dot(n2));
                edge_lune_measure(theta)
            }
            _ => Err(Error::ExactModeUnsupported { face_dim: face.dim, dim: self.dim }),
        }
    }

    /// Vertices sharing a 1-face with `v`.
    fn edge_neighbors(&self, v: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for face in self.faces.iter().filter(|f| f.dim == 1) {
            if face.vertices.contains(&v) {
                out.extend(face.vertices.iter().copied().filter(|&w| w != v));
            }
        }
        out.sort_unstable();
        out.dedup();
        if out.len() < 2 {
            return Err(Error::InvalidLattice {
                reason: format!("vertex {v} has fewer than two edge neighbors"),
            });
        }
        Ok(out)
    }

    /// Alternating sum of per-face solid angles over all proper faces,
    /// compared against `(-1)^(n-1) n omega_n`. Monte Carlo faces draw from
    /// per-face sub-streams and their standard errors combine in quadrature.
    pub fn gram_euler_sum(
        &self,
        mode: AngleMode,
        n_samples: u64,
        seed: u64,
    ) -> Result<GramEulerReport> {
        let mut entries = Vec::with_capacity(self.faces.len());
        let mut sum = 0.0;
        let mut var = 0.0;
        for (i, face) in self.faces.iter().enumerate() {
            let angle = self.face_solid_angle(i, mode, n_samples, sub_seed(seed, i as u64 + 1))?;
            let sign = if face.dim % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * angle.value();
            var += angle.stderr() * angle.stderr();
            entries.push(GramEulerEntry {
                face_dim: face.dim,
                vertices: face.vertices.clone(),
                angle,
            });
        }
        let target_sign = if (self.dim - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let target = target_sign * sphere_surface_area(self.dim)?;
        let combined_stderr = var.sqrt();
        let tolerance = match mode {
            AngleMode::Exact => 1e-9,
            AngleMode::MonteCarlo => 4.0 * combined_stderr,
        };
        Ok(GramEulerReport {
            per_face_angles: entries,
            alternating_sum: sum,
            combined_stderr,
            target,
            tolerance,
            pass: (sum - target).abs() <= tolerance,
            seed,
        })
    }
}

fn normalize_faces(faces: Vec<Face>) -> Result<Vec<Face>> {
    let mut out = Vec::with_capacity(faces.len());
    for mut face in faces {
        face.vertices.sort_unstable();
        face.vertices.dedup();
        out.push(face);
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i] == out[j] {
                return Err(Error::InvalidLattice {
                    reason: format!("duplicate face {:?}", out[i].vertices),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const TETRA_VERTEX_ANGLE: f64 = 0.551285598432531;
    const TETRA_EDGE_ANGLE: f64 = 2.4619188346815495;

    fn regular_tetrahedron() -> PolytopeFaceLattice {
        let s = SimplexN::from_coords(&[
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ])
        .unwrap();
        PolytopeFaceLattice::build_simplex_lattice(&s).unwrap()
    }

    fn unit_square() -> PolytopeFaceLattice {
        PolytopeFaceLattice::polygon(vec![
            Vector::new(vec![0.0, 0.0]).unwrap(),
            Vector::new(vec![1.0, 0.0]).unwrap(),
            Vector::new(vec![1.0, 1.0]).unwrap(),
            Vector::new(vec![0.0, 1.0]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn f_vectors_of_simplices() {
        assert_eq!(regular_tetrahedron().f_vector(), vec![4, 6, 4]);

        let tri = SimplexN::from_coords(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(
            PolytopeFaceLattice::build_simplex_lattice(&tri).unwrap().f_vector(),
            vec![3, 3]
        );

        let s4 = SimplexN::from_coords(&[
            vec![0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(
            PolytopeFaceLattice::build_simplex_lattice(&s4).unwrap().f_vector(),
            vec![5, 10, 10, 5]
        );
    }

    #[test]
    fn facet_angle_is_half_sphere() {
        let t = regular_tetrahedron();
        let facet_idx = t.faces().iter().position(|f| f.dim == 2).unwrap();
        let angle = t.face_solid_angle(facet_idx, AngleMode::Exact, 0, 0).unwrap();
        assert!((angle.value() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_exact_angles() {
        let t = regular_tetrahedron();
        for (i, face) in t.faces().iter().enumerate() {
            let angle = t.face_solid_angle(i, AngleMode::Exact, 0, 0).unwrap().value();
            match face.dim {
                0 => assert!((angle - TETRA_VERTEX_ANGLE).abs() < 1e-9, "vertex angle {angle}"),
                1 => assert!((angle - TETRA_EDGE_ANGLE).abs() < 1e-9, "edge angle {angle}"),
                2 => assert!((angle - 2.0 * PI).abs() < 1e-12),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn square_vertex_angle_and_sum() {
        let sq = unit_square();
        for (i, face) in sq.faces().iter().enumerate() {
            let angle = sq.face_solid_angle(i, AngleMode::Exact, 0, 0).unwrap().value();
            match face.dim {
                0 => assert!((angle - PI / 2.0).abs() < 1e-12),
                1 => assert!((angle - PI).abs() < 1e-12),
                _ => unreachable!(),
            }
        }
        let report = sq.gram_euler_sum(AngleMode::Exact, 0, 0).unwrap();
        assert!(report.pass);
        assert!((report.alternating_sum + 2.0 * PI).abs() < 1e-12);
        assert!((report.target + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn pentagon_exact_sum() {
        let vertices = (0..5)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / 5.0;
                Vector::new(vec![phi.cos(), phi.sin()]).unwrap()
            })
            .collect();
        let p = PolytopeFaceLattice::polygon(vertices).unwrap();
        // interior angles of the regular pentagon are 3 pi / 5
        let v0 = p.faces().iter().position(|f| f.dim == 0).unwrap();
        let angle = p.face_solid_angle(v0, AngleMode::Exact, 0, 0).unwrap().value();
        assert!((angle - 3.0 * PI / 5.0).abs() < 1e-12);
        let report = p.gram_euler_sum(AngleMode::Exact, 0, 0).unwrap();
        assert!(report.pass);
        assert!((report.alternating_sum + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_exact_gram_euler() {
        let report = regular_tetrahedron().gram_euler_sum(AngleMode::Exact, 0, 0).unwrap();
        assert!(report.pass);
        assert!((report.alternating_sum - 4.0 * PI).abs() < 1e-9);
        assert!((report.target - 4.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn exact_and_mc_agree_per_face_on_tetrahedron() {
        let t = regular_tetrahedron();
        for i in 0..t.faces().len() {
            let exact = t.face_solid_angle(i, AngleMode::Exact, 0, 0).unwrap().value();
            let mc = match t.face_solid_angle(i, AngleMode::MonteCarlo, 100_000, 13).unwrap() {
                FaceAngle::Estimated(r) => r,
                FaceAngle::Exact(_) => unreachable!(),
            };
            assert!(mc.covers(exact, 4.0), "face {i}: exact {exact} vs {}", mc.estimate);
        }
    }

    #[test]
    fn angles_monotone_along_subface_chains() {
        let t = regular_tetrahedron();
        let angles: Vec<(usize, Vec<usize>, f64)> = t
            .faces()
            .iter()
            .enumerate()
            .map(|(i, f)| {
                (
                    f.dim,
                    f.vertices.clone(),
                    t.face_solid_angle(i, AngleMode::Exact, 0, 0).unwrap().value(),
                )
            })
            .collect();
        for (da, va, aa) in &angles {
            for (db, vb, ab) in &angles {
                let subset = va.iter().all(|v| vb.contains(v));
                if subset && da < db {
                    assert!(aa <= &(ab + 1e-12), "angle {aa} at {va:?} vs {ab} at {vb:?}");
                }
            }
        }
    }

    #[test]
    fn validation_catches_bad_lattices() {
        // vertex outside a facet
        let bad = PolytopeFaceLattice::new(
            2,
            vec![
                Vector::new(vec![0.0, 0.0]).unwrap(),
                Vector::new(vec![1.0, 0.0]).unwrap(),
                Vector::new(vec![0.0, -1.0]).unwrap(),
            ],
            vec![Facet { normal: UnitVector::from_coords(&[0.0, 1.0]).unwrap(), offset: 0.0 }],
            vec![Face { dim: 0, vertices: vec![0] }],
        );
        assert!(matches!(bad, Err(Error::InvalidLattice { .. })));

        // face vertex set not matching its supporting facets
        let sq = unit_square();
        let mut faces = sq.faces().to_vec();
        faces.retain(|f| !(f.dim == 1 && f.vertices == vec![0, 1]));
        faces.push(Face { dim: 1, vertices: vec![0, 2] });
        let rebuilt =
            PolytopeFaceLattice::new(2, sq.vertices().to_vec(), sq.facets().to_vec(), faces);
        assert!(rebuilt.is_err());
    }

    #[test]
    fn json_parsing_modes() {
        // bare simplex: lattice auto-built
        let text = r#"{ "dim": 3, "vertices": [[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1]] }"#;
        let lat = PolytopeFaceLattice::from_json(text).unwrap();
        assert_eq!(lat.f_vector(), vec![4, 6, 4]);

        // explicit unit-square lattice round-trips through validation
        let sq = unit_square();
        let repr = LatticeRepr {
            dim: 2,
            vertices: sq.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            facets: Some(
                sq.facets()
                    .iter()
                    .map(|f| FacetRepr { normal: f.normal.coords().to_vec(), offset: f.offset })
                    .collect(),
            ),
            faces: Some(sq.faces().to_vec()),
        };
        let text = serde_json::to_string(&repr).unwrap();
        let parsed = PolytopeFaceLattice::from_json(&text).unwrap();
        assert_eq!(parsed.f_vector(), vec![4, 4]);

        // facets without faces is an error
        let bad = r#"{ "dim": 2, "vertices": [[0,0],[1,0],[0,1]],
                       "facets": [{"normal": [1,0], "offset": 0}] }"#;
        assert!(PolytopeFaceLattice::from_json(bad).is_err());
    }
}
