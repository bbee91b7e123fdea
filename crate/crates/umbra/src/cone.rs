//! Polyhedral cones at the origin in 3-space: construction and validation,
//! classification of their shadows on random hyperplanes, and the exact
//! expectation formulas tying shadow statistics to the cone's solid angle.
//!
//! A cone is the set of non-negative combinations of k >= 3 unit generators
//! held in cyclic convex position. Its shadow on the plane `u^perp` is either
//! the whole plane (when `u` points into the cone or its negation), or a
//! salient planar cone with one vertex and exactly two edges. Directions that
//! land within a small margin of the boundary between those outcomes are
//! reported as `Degenerate` and excluded from statistics.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{complement_basis, UnitVector, Vector};
use crate::linalg;
use crate::spherical::tangent_angle;

/// Construction threshold on the k = 3 generator determinant.
pub const CONE_DET_TOL: f64 = 1e-10;
/// Minimum witness margin for the saliency check.
pub const SALIENCY_TOL: f64 = 1e-10;
/// Classification margin on normalized quantities; anything closer to a
/// decision boundary than this is a `Degenerate` sample.
pub const DEFAULT_CLASSIFY_EPS: f64 = 1e-9;

/// A salient polyhedral cone with unit generators in cyclic convex position.
#[derive(Clone, Debug)]
pub struct Cone {
    generators: Vec<UnitVector>,
    /// Inward unit normal of the facet spanned by generators (i, i+1).
    facet_normals: Vec<UnitVector>,
    /// For k = 3: inverse of the generator column matrix, row-major.
    coeff_inverse: Option<[f64; 9]>,
}

/// Where a direction sits relative to the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MembershipClass {
    Interior,
    Boundary,
    Outside,
}

/// Membership verdict; carries the coefficient vector for 3-generator cones.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub class: MembershipClass,
    /// Coefficients `t` with `u = t1 g1 + t2 g2 + t3 g3`, when k = 3.
    pub coefficients: Option<[f64; 3]>,
}

/// Classified shadow of a cone on the plane `u^perp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ProjectionOutcome {
    /// The shadow covers the whole plane: no vertices, no edges.
    FullPlane,
    /// The shadow is a salient planar cone: one vertex, two edges, and the
    /// two generators whose projections bound it.
    SalientCone { boundary_generators: [usize; 2] },
    /// A classification margin fell below epsilon; excluded from statistics.
    Degenerate,
}

impl ProjectionOutcome {
    pub fn vertex_count(&self) -> Option<u32> {
        match self {
            ProjectionOutcome::FullPlane => Some(0),
            ProjectionOutcome::SalientCone { .. } => Some(1),
            ProjectionOutcome::Degenerate => None,
        }
    }

    pub fn edge_count(&self) -> Option<u32> {
        match self {
            ProjectionOutcome::FullPlane => Some(0),
            ProjectionOutcome::SalientCone { .. } => Some(2),
            ProjectionOutcome::Degenerate => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, ProjectionOutcome::Degenerate)
    }
}

/// Exact shadow expectations derived from the cone's inner angles.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProjectionExpectations {
    pub expected_vertices: f64,
    pub expected_edges: f64,
    pub p_full_plane: f64,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    generators: Vec<Vec<f64>>,
}

impl Cone {
    /// Build a cone from generator directions (any length, normalized here).
    ///
    /// Validates that the generators span a salient cone with none of them
    /// redundant, and reorders them cyclically around the mean direction if
    /// the input order is not already cyclic.
    pub fn new(raw: &[Vector]) -> Result<Self> {
        let k = raw.len();
        if k < 3 {
            return Err(Error::TooFewGenerators { count: k });
        }
        for v in raw {
            if v.dim() != 3 {
                return Err(Error::DimensionMismatch { left: v.dim(), right: 3 });
            }
        }
        let gens: Vec<UnitVector> = raw.iter().map(|v| v.normalized()).collect::<Result<_>>()?;

        check_salient(&gens)?;

        let (gens, original) = if k == 3 {
            let det = generator_det(&gens);
            if det.abs() < CONE_DET_TOL {
                return Err(Error::DegenerateCone { det });
            }
            (gens, vec![0, 1, 2])
        } else {
            order_cyclically(gens)?
        };

        check_no_redundant_generator(&gens, &original)?;
        let facet_normals = build_facet_normals(&gens, &original)?;

        let coeff_inverse = if k == 3 { Some(invert_generator_matrix(&gens)?) } else { None };

        Ok(Self { generators: gens, facet_normals, coeff_inverse })
    }

    pub fn from_coords(generators: &[Vec<f64>]) -> Result<Self> {
        let vs: Vec<Vector> =
            generators.iter().map(|g| Vector::from_slice(g)).collect::<Result<_>>()?;
        Self::new(&vs)
    }

    /// Parse the `{ "generators": [[x,y,z], ...] }` schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ConeRepr = serde_json::from_str(text)?;
        Self::from_coords(&repr.generators)
    }

    pub fn to_json(&self) -> String {
        let repr =
            ConeRepr { generators: self.generators.iter().map(|g| g.coords().to_vec()).collect() };
        serde_json::to_string_pretty(&repr).expect("cone serialization cannot fail")
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[UnitVector] {
        &self.generators
    }

    /// Inward unit normal of the facet spanned by generators (i, i+1 mod k).
    pub fn facet_normal(&self, i: usize) -> &UnitVector {
        &self.facet_normals[i]
    }

    /// Signed margins that decide membership: the coefficient vector for
    /// k = 3, the facet-normal dot products otherwise.
    fn membership_margins(&self, u: &UnitVector) -> Vec<f64> {
        match &self.coeff_inverse {
            Some(inv) => {
                let mut t = [0.0; 3];
                for (r, slot) in t.iter_mut().enumerate() {
                    *slot = inv[r * 3] * u[0] + inv[r * 3 + 1] * u[1] + inv[r * 3 + 2] * u[2];
                }
                t.to_vec()
            }
            None => self.facet_normals.iter().map(|n| n.dot(u)).collect(),
        }
    }

    /// Classify `u` against the cone with margin `eps`.
    pub fn direction_membership_eps(&self, u: &UnitVector, eps: f64) -> Membership {
        let margins = self.membership_margins(u);
        let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
        let class = if min > eps {
            MembershipClass::Interior
        } else if min >= -eps {
            MembershipClass::Boundary
        } else {
            MembershipClass::Outside
        };
        let coefficients = if self.generator_count() == 3 {
            Some([margins[0], margins[1], margins[2]])
        } else {
            None
        };
        Membership { class, coefficients }
    }

    pub fn direction_membership(&self, u: &UnitVector) -> Membership {
        self.direction_membership_eps(u, DEFAULT_CLASSIFY_EPS)
    }

    /// Classify the shadow of the cone on `u^perp`.
    pub fn classify_projection(&self, u: &UnitVector) -> ProjectionOutcome {
        self.classify_projection_eps(u, DEFAULT_CLASSIFY_EPS)
    }

    pub fn classify_projection_eps(&self, u: &UnitVector, eps: f64) -> ProjectionOutcome {
        let margins = self.membership_margins(u);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut marginal = false;
        for &m in &margins {
            min = min.min(m);
            max = max.max(m);
            marginal |= m.abs() <= eps;
        }
        // u interior to the cone or to its negation: the shadow is the plane.
        if min > eps || max < -eps {
            return ProjectionOutcome::FullPlane;
        }
        if marginal {
            return ProjectionOutcome::Degenerate;
        }
        self.salient_shadow(u, eps)
    }

    /// Extreme rays of the projected generator fan, for `u` strictly outside
    /// the double cone.
    fn salient_shadow(&self, u: &UnitVector, eps: f64) -> ProjectionOutcome {
        let basis = match complement_basis(u) {
            Ok(b) => b,
            Err(_) => return ProjectionOutcome::Degenerate,
        };
        let k = self.generators.len();
        let mut rays: Vec<(f64, f64)> = Vec::with_capacity(k);
        for g in &self.generators {
            let x = g.dot(&basis[0]);
            let y = g.dot(&basis[1]);
            let r = (x * x + y * y).sqrt();
            if r <= eps {
                // generator parallel to the projection direction
                return ProjectionOutcome::Degenerate;
            }
            rays.push((x / r, y / r));
        }
        // Pairwise collinear projected rays would make edge identities
        // ambiguous; call those samples out rather than guess.
        for i in 0..k {
            for j in i + 1..k {
                let cross = rays[i].0 * rays[j].1 - rays[i].1 * rays[j].0;
                if cross.abs() <= eps {
                    return ProjectionOutcome::Degenerate;
                }
            }
        }
        let mut extremes = Vec::with_capacity(2);
        for i in 0..k {
            let mut pos = false;
            let mut neg = false;
            for j in 0..k {
                if i == j {
                    continue;
                }
                let cross = rays[i].0 * rays[j].1 - rays[i].1 * rays[j].0;
                if cross > 0.0 {
                    pos = true;
                } else {
                    neg = true;
                }
            }
            if !(pos && neg) {
                extremes.push(i);
            }
        }
        if extremes.len() != 2 {
            // unreachable for a strictly salient shadow; classified away
            return ProjectionOutcome::Degenerate;
        }
        ProjectionOutcome::SalientCone { boundary_generators: [extremes[0], extremes[1]] }
    }

    /// Lune test for a single edge: does generator `edge` project onto the
    /// shadow's boundary under `u`? `None` when `u` is within `eps` of either
    /// adjacent facet plane. Independent of [`Cone::classify_projection`].
    pub fn edge_in_shadow_boundary(&self, edge: usize, u: &UnitVector, eps: f64) -> Option<bool> {
        let k = self.generators.len();
        let before = self.facet_normals[(edge + k - 1) % k].dot(u);
        let after = self.facet_normals[edge].dot(u);
        if before.abs() <= eps || after.abs() <= eps {
            return None;
        }
        // The edge projects to the interior exactly when u points into the
        // edge's lune or its negation, i.e. both dots share a sign.
        Some(before * after < 0.0)
    }

    /// Inner angle of the spherical cross-section polygon at each generator.
    pub fn inner_angles(&self) -> Vec<f64> {
        let k = self.generators.len();
        (0..k)
            .map(|i| {
                tangent_angle(
                    &self.generators[i],
                    &self.generators[(i + k - 1) % k],
                    &self.generators[(i + 1) % k],
                )
            })
            .collect()
    }

    /// Solid angle at the apex: the spherical polygon's angle excess,
    /// `sum(theta_i) - (k - 2) pi` steradians.
    pub fn solid_angle_excess(&self) -> f64 {
        let k = self.generators.len();
        let sum: f64 = self.inner_angles().iter().sum();
        sum - (k as f64 - 2.0) * PI
    }

    /// Exact shadow expectations:
    /// `E[vertices] = 1 - alpha / 2pi`, `E[edges] = k - sum(theta) / pi`,
    /// `P[full plane] = alpha / 2pi`.
    pub fn exact_projection_expectations(&self) -> ProjectionExpectations {
        let k = self.generators.len();
        let theta_sum: f64 = self.inner_angles().iter().sum();
        let alpha = theta_sum - (k as f64 - 2.0) * PI;
        ProjectionExpectations {
            expected_vertices: 1.0 - alpha / (2.0 * PI),
            expected_edges: k as f64 - theta_sum / PI,
            p_full_plane: alpha / (2.0 * PI),
        }
    }
}

fn generator_det(gens: &[UnitVector]) -> f64 {
    let m = [
        gens[0][0], gens[0][1], gens[0][2], gens[1][0], gens[1][1], gens[1][2], gens[2][0],
        gens[2][1], gens[2][2],
    ];
    linalg::det(&m, 3)
}

/// Row-major inverse of the column matrix `[g1 g2 g3]`, so that
/// `t = inv * u` solves `t1 g1 + t2 g2 + t3 g3 = u`.
fn invert_generator_matrix(gens: &[UnitVector]) -> Result<[f64; 9]> {
    let g = |c: usize, r: usize| gens[c][r];
    // column matrix entries m[r][c] = gens[c][r]
    let m = [g(0, 0), g(1, 0), g(2, 0), g(0, 1), g(1, 1), g(2, 1), g(0, 2), g(1, 2), g(2, 2)];
    let det = linalg::det(&m, 3);
    if det.abs() < CONE_DET_TOL {
        return Err(Error::DegenerateCone { det });
    }
    let cof = |r: usize, c: usize| {
        let mut sub = [0.0; 4];
        let mut idx = 0;
        for rr in 0..3 {
            for cc in 0..3 {
                if rr != r && cc != c {
                    sub[idx] = m[rr * 3 + cc];
                    idx += 1;
                }
            }
        }
        let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
        sign * (sub[0] * sub[3] - sub[1] * sub[2])
    };
    let mut inv = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            // adjugate transpose
            inv[r * 3 + c] = cof(c, r) / det;
        }
    }
    Ok(inv)
}

/// Saliency check: search for a witness direction `w` with
/// `w . g_i >= SALIENCY_TOL` for every generator. The max-min margin over the
/// sphere is attained with one, two, or three active generators, so the
/// generators themselves, all pair bisectors, and all equal-margin triple
/// solutions cover every candidate optimum.
fn check_salient(gens: &[UnitVector]) -> Result<()> {
    let k = gens.len();
    let margin = |w: &UnitVector| gens.iter().map(|g| g.dot(w)).fold(f64::INFINITY, f64::min);

    let mut best = f64::NEG_INFINITY;
    let mut consider = |v: &Vector| {
        if let Ok(w) = v.normalized() {
            let m = margin(&w);
            if m > best {
                best = m;
            }
        }
    };

    let mut mean = Vector::zeros(3);
    for g in gens {
        consider(g.as_vector());
        mean = mean.add(g);
    }
    consider(&mean);
    for i in 0..k {
        for j in i + 1..k {
            consider(&gens[i].add(&gens[j]));
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let c0 = [gens[i][0], gens[j][0], gens[l][0]];
                let c1 = [gens[i][1], gens[j][1], gens[l][1]];
                let c2 = [gens[i][2], gens[j][2], gens[l][2]];
                if let Some(w) = linalg::solve3_columns(&c0, &c1, &c2, &[1.0, 1.0, 1.0]) {
                    consider(&Vector::new(w.to_vec())?);
                }
            }
        }
    }
    if best >= SALIENCY_TOL {
        Ok(())
    } else {
        Err(Error::NotSalient)
    }
}

/// Sort generators by azimuth around the mean direction. Keeps the input
/// order when it is already a cyclic rotation (in either orientation) of the
/// sorted order. Returns the generators plus their original input indices.
fn order_cyclically(gens: Vec<UnitVector>) -> Result<(Vec<UnitVector>, Vec<usize>)> {
    let k = gens.len();
    let mut mean = Vector::zeros(3);
    for g in &gens {
        mean = mean.add(g);
    }
    // saliency guarantees a nonzero mean
    let axis = mean.normalized()?;
    let basis = complement_basis(&axis)?;
    let mut angles = Vec::with_capacity(k);
    for (i, g) in gens.iter().enumerate() {
        let x = g.dot(&basis[0]);
        let y = g.dot(&basis[1]);
        if (x * x + y * y).sqrt() < SALIENCY_TOL {
            return Err(Error::UnorderableGenerators { index: i });
        }
        angles.push(y.atan2(x));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| angles[a].partial_cmp(&angles[b]).unwrap());

    if is_cyclic_identity(&order) {
        return Ok((gens, (0..k).collect()));
    }
    let mut sorted = Vec::with_capacity(k);
    for &i in &order {
        sorted.push(gens[i].clone());
    }
    Ok((sorted, order))
}

/// Is `order` a rotation of (0..k) in either direction?
fn is_cyclic_identity(order: &[usize]) -> bool {
    let k = order.len();
    let start = order.iter().position(|&v| v == 0).unwrap();
    let forward = (0..k).all(|i| order[(start + i) % k] == i);
    let backward = (0..k).all(|i| order[(start + k - i) % k] == i);
    forward || backward
}

/// Convex position: no generator may lie in the cone of the others. By
/// Caratheodory a containment in 3-space is witnessed by some 3-subset, so
/// all 3-subsets of the others are solved directly.
fn check_no_redundant_generator(gens: &[UnitVector], original: &[usize]) -> Result<()> {
    let k = gens.len();
    if k == 3 {
        // three independent generators are always in convex position
        return Ok(());
    }
    for i in 0..k {
        let others: Vec<&UnitVector> = (0..k).filter(|&j| j != i).map(|j| &gens[j]).collect();
        let target = [gens[i][0], gens[i][1], gens[i][2]];
        let m = others.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let c0 = [others[a][0], others[a][1], others[a][2]];
                    let c1 = [others[b][0], others[b][1], others[b][2]];
                    let c2 = [others[c][0], others[c][1], others[c][2]];
                    if let Some(t) = linalg::solve3_columns(&c0, &c1, &c2, &target) {
                        if t.iter().all(|&ti| ti >= -SALIENCY_TOL) {
                            return Err(Error::RedundantGenerator { index: original[i] });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Inward facet normals, oriented by the mean direction and verified against
/// every non-adjacent generator.
fn build_facet_normals(gens: &[UnitVector], original: &[usize]) -> Result<Vec<UnitVector>> {
    let k = gens.len();
    let mut mean = Vector::zeros(3);
    for g in gens {
        mean = mean.add(g);
    }
    let mut normals = Vec::with_capacity(k);
    for i in 0..k {
        let a = &gens[i];
        let b = &gens[(i + 1) % k];
        let cross = a.cross3(b);
        if cross.norm() < CONE_DET_TOL {
            // duplicate or antipodal neighbors
            return Err(Error::RedundantGenerator { index: original[(i + 1) % k] });
        }
        let mut n = cross.normalized()?;
        if n.dot(&mean) < 0.0 {
            n = n.negated();
        }
        for (j, g) in gens.iter().enumerate() {
            if j == i || j == (i + 1) % k {
                continue;
            }
            if n.dot(g) < SALIENCY_TOL {
                return Err(Error::RedundantGenerator { index: original[j] });
            }
        }
        normals.push(n);
    }
    Ok(normals)
}
