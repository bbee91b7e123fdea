//! n-simplices in n-space: shadow classification under random orthogonal
//! projection, vertex solid angles, and the identity relating the two.
//!
//! A projected simplex drops into `u^perp`, where its n+1 vertices either
//! stay in convex position (shadow has n+1 corners) or exactly one falls
//! inside the hull of the others and the shadow is an (n-1)-simplex. The
//! probability of the latter equals `2 / (n omega_n)` times the sum of the
//! simplex's vertex solid angles, which the checker verifies by estimating
//! both sides from independent streams.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{estimate_solid_angle_at_point, EstimatorReport, MIN_SAMPLES};
use crate::geom::{complement_basis, sphere_surface_area, UnitVector, Vector};
use crate::linalg::LuFactor;
use crate::sample::{sub_seed, unit_vector_at};

/// Edge-matrix determinant threshold for affine independence.
pub const SIMPLEX_DET_TOL: f64 = 1e-10;
/// Margin for extremality and membership decisions.
pub const SIMPLEX_EPS: f64 = 1e-9;

/// An n-simplex: n+1 affinely independent vertices in n-space, n >= 2.
#[derive(Clone, Debug)]
pub struct SimplexN {
    vertices: Vec<Vector>,
    dim: usize,
}

/// Shadow classification of one projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ShadowVerdict {
    /// Exactly one projected vertex is inside the hull of the others.
    IsSimplex { interior_vertex: usize },
    /// All projected vertices are extreme.
    NotSimplex,
    /// An extremality margin fell below epsilon.
    Degenerate,
}

/// Both sides of the projection-probability identity.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionIdentityReport {
    pub lhs: EstimatorReport,
    pub rhs: EstimatorReport,
    pub vertex_angles: Vec<EstimatorReport>,
    pub difference: f64,
    pub combined_stderr: f64,
    pub pass: bool,
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    vertices: Vec<Vec<f64>>,
}

impl SimplexN {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 2 });
        }
        let dim = vertices[0].dim();
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { left: v.dim(), right: dim });
            }
        }
        if vertices.len() != dim + 1 {
            return Err(Error::VertexCountMismatch { dim, expected: dim + 1, got: vertices.len() });
        }
        let det = edge_matrix_det(&vertices, dim);
        if det.abs() < SIMPLEX_DET_TOL {
            return Err(Error::DegenerateSimplex { det });
        }
        Ok(Self { vertices, dim })
    }

    pub fn from_coords(vertices: &[Vec<f64>]) -> Result<Self> {
        let vs: Vec<Vector> =
            vertices.iter().map(|v| Vector::from_slice(v)).collect::<Result<_>>()?;
        Self::new(vs)
    }

    /// Parse the `{ "vertices": [[...], ...] }` schema; the dimension is the
    /// coordinate length and the vertex count must be dim + 1.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SimplexRepr = serde_json::from_str(text)?;
        Self::from_coords(&repr.vertices)
    }

    pub fn to_json(&self) -> String {
        let repr =
            SimplexRepr { vertices: self.vertices.iter().map(|v| v.coords().to_vec()).collect() };
        serde_json::to_string_pretty(&repr).expect("simplex serialization cannot fail")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Classify the shadow on `u^perp` with the default margin.
    pub fn classify_projection(&self, u: &UnitVector) -> Result<ShadowVerdict> {
        self.classify_projection_eps(u, SIMPLEX_EPS)
    }

    pub fn classify_projection_eps(&self, u: &UnitVector, eps: f64) -> Result<ShadowVerdict> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: u.dim(), right: self.dim });
        }
        Ok(match self.non_extreme_projected(u, eps) {
            Some(interior) => match interior.len() {
                0 => ShadowVerdict::NotSimplex,
                1 => ShadowVerdict::IsSimplex { interior_vertex: interior[0] },
                // more than one interior point cannot happen for a strictly
                // generic projection of a simplex
                _ => ShadowVerdict::Degenerate,
            },
            None => ShadowVerdict::Degenerate,
        })
    }

    /// Indices of projected vertices expressible as a strict convex
    /// combination of the others; `None` when a margin is below `eps`.
    ///
    /// For each candidate the combination weights solve a square system:
    /// n - 1 coordinate equations in `u^perp` plus the affine constraint.
    fn non_extreme_projected(&self, u: &UnitVector, eps: f64) -> Option<Vec<usize>> {
        let n = self.dim;
        let basis = complement_basis(u).ok()?;
        let projected: Vec<Vec<f64>> =
            self.vertices.iter().map(|v| basis.iter().map(|b| v.dot(b)).collect()).collect();

        let mut interior = Vec::new();
        let mut matrix = vec![0.0; n * n];
        let mut rhs = vec![0.0; n];
        for i in 0..=n {
            let others: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
            for (col, &j) in others.iter().enumerate() {
                for row in 0..n - 1 {
                    matrix[row * n + col] = projected[j][row];
                }
                matrix[(n - 1) * n + col] = 1.0;
            }
            rhs[..n - 1].copy_from_slice(&projected[i]);
            rhs[n - 1] = 1.0;
            let factor = match LuFactor::new(&matrix, n) {
                Ok(f) => f,
                Err(_) => return None,
            };
            let weights = factor.solve(&rhs);
            let min = weights.iter().cloned().fold(f64::INFINITY, f64::min);
            if min.abs() <= eps {
                return None;
            }
            if min > eps {
                interior.push(i);
            }
        }
        Some(interior)
    }

    /// Solid angle of the simplex at vertex `v`, estimated by sampling
    /// directions and accepting those pointing into the simplex. Directions
    /// are tested by solving for their coordinates in the basis of edge
    /// vectors out of `v`.
    pub fn estimate_vertex_solid_angle(
        &self,
        v: usize,
        n_samples: u64,
        seed: u64,
    ) -> Result<EstimatorReport> {
        if v >= self.vertices.len() {
            return Err(Error::VertexIndexOutOfRange { index: v, count: self.vertices.len() });
        }
        let n = self.dim;
        let mut matrix = vec![0.0; n * n];
        for (col, j) in (0..=n).filter(|&j| j != v).enumerate() {
            let edge = self.vertices[j].sub(&self.vertices[v]);
            for row in 0..n {
                matrix[row * n + col] = edge[row];
            }
        }
        let factor =
            LuFactor::new(&matrix, n).map_err(|_| Error::DegenerateSimplex { det: 0.0 })?;
        let oracle = move |u: &UnitVector| {
            let c = factor.solve(u.coords());
            c.iter().all(|&ci| ci > -SIMPLEX_EPS)
        };
        estimate_solid_angle_at_point(oracle, n, n_samples, seed)
    }

    /// Fraction of non-degenerate shadows that are (n-1)-simplices.
    pub fn estimate_p_simplex(&self, n_samples: u64, seed: u64) -> Result<EstimatorReport> {
        if n_samples < MIN_SAMPLES {
            return Err(Error::TooFewSamples { got: n_samples, min: MIN_SAMPLES });
        }
        let n = self.dim;
        let (hits, degenerate) = crate::estimator::accumulate_pair(n_samples, |i| {
            let u = unit_vector_at(seed, i, n).expect("dim >= 2");
            match self.classify_projection(&u).expect("dim matches") {
                ShadowVerdict::IsSimplex { .. } => (1, 0),
                ShadowVerdict::NotSimplex => (0, 0),
                ShadowVerdict::Degenerate => (0, 1),
            }
        });
        if degenerate as f64 > crate::estimator::MAX_DEGENERATE_FRACTION * n_samples as f64 {
            return Err(Error::ExcessiveDegeneracy { degenerate, samples: n_samples });
        }
        Ok(EstimatorReport::from_bernoulli(hits, n_samples, degenerate, seed))
    }

    /// Estimate both sides of the identity
    /// `p = (2 / (n omega_n)) sum_v alpha(v)` from independent sub-streams
    /// and compare them at four combined standard errors.
    pub fn check_projection_identity(
        &self,
        n_samples: u64,
        seed: u64,
    ) -> Result<ProjectionIdentityReport> {
        let n = self.dim;
        let lhs = self.estimate_p_simplex(n_samples, sub_seed(seed, 0))?;
        let mut vertex_angles = Vec::with_capacity(n + 1);
        let mut angle_sum = 0.0;
        let mut var_sum = 0.0;
        for v in 0..=n {
            let report =
                self.estimate_vertex_solid_angle(v, n_samples, sub_seed(seed, v as u64 + 1))?;
            angle_sum += report.estimate;
            var_sum += report.stderr * report.stderr;
            vertex_angles.push(report);
        }
        let factor = 2.0 / sphere_surface_area(n)?;
        let rhs = EstimatorReport::rescaled(
            factor * angle_sum,
            factor * var_sum.sqrt(),
            n_samples,
            0,
            seed,
        );
        let difference = lhs.estimate - rhs.estimate;
        let combined_stderr = (lhs.stderr * lhs.stderr + rhs.stderr * rhs.stderr).sqrt();
        Ok(ProjectionIdentityReport {
            pass: difference.abs() <= 4.0 * combined_stderr,
            lhs,
            rhs,
            vertex_angles,
            difference,
            combined_stderr,
        })
    }
}

fn edge_matrix_det(vertices: &[Vector], dim: usize) -> f64 {
    let mut m = vec![0.0; dim * dim];
    for row in 0..dim {
        let edge = vertices[row + 1].sub(&vertices[0]);
        m[row * dim..(row + 1) * dim].copy_from_slice(edge.coords());
    }
    crate::linalg::det(&m, dim)
}
