//! Seeded Monte Carlo estimators for projection statistics and solid angles.
//!
//! Every estimator draws directions through the counter-based stream, so a
//! result is a pure function of its inputs and seed. Workers fold disjoint
//! index ranges into integer counters and the merge is an order-independent
//! sum, which makes parallel and serial runs bit-identical.

use serde::{Deserialize, Serialize};

use crate::cone::{Cone, ProjectionOutcome, DEFAULT_CLASSIFY_EPS};
use crate::error::{Error, Result};
use crate::geom::{sphere_surface_area, UnitVector};
use crate::sample::unit_vector_at;

/// Estimators refuse to run below this sample count.
pub const MIN_SAMPLES: u64 = 100;
/// Degenerate-sample fraction beyond which a run is rejected as non-generic.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.01;

const Z95: f64 = 1.96;

/// One statistical claim: point estimate, standard error, 95% interval, and
/// the seed that reproduces it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub samples: u64,
    pub degenerate: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci95: [f64; 2],
    pub seed: u64,
}

impl EstimatorReport {
    /// Report for a plain Bernoulli rate.
    pub(crate) fn from_bernoulli(count: u64, samples: u64, degenerate: u64, seed: u64) -> Self {
        Self::from_count(count, samples, degenerate, seed, 1.0, 0.0)
    }

    /// Report around an externally computed estimate and standard error.
    pub(crate) fn rescaled(
        estimate: f64,
        stderr: f64,
        samples: u64,
        degenerate: u64,
        seed: u64,
    ) -> Self {
        Self::from_estimate(estimate, stderr, samples, degenerate, seed)
    }

    /// Report for a Bernoulli count rescaled to `offset + scale * p`.
    fn from_count(
        count: u64,
        samples: u64,
        degenerate: u64,
        seed: u64,
        scale: f64,
        offset: f64,
    ) -> Self {
        let n_eff = (samples - degenerate) as f64;
        let p = count as f64 / n_eff;
        // Bessel-corrected sample standard deviation over the indicator data.
        let stderr = scale.abs() * (p * (1.0 - p) / (n_eff - 1.0)).sqrt();
        let estimate = offset + scale * p;
        Self::from_estimate(estimate, stderr, samples, degenerate, seed)
    }

    fn from_estimate(estimate: f64, stderr: f64, samples: u64, degenerate: u64, seed: u64) -> Self {
        Self {
            samples,
            degenerate,
            estimate,
            stderr,
            ci95: [estimate - Z95 * stderr, estimate + Z95 * stderr],
            seed,
        }
    }

    /// Is `truth` within `z` standard errors of the estimate?
    pub fn covers(&self, truth: f64, z: f64) -> bool {
        (self.estimate - truth).abs() <= z * self.stderr
    }
}

/// Shadow statistics of one cone: full-plane rate, vertex and edge counts,
/// and the per-generator boundary rates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeCensus {
    pub p_full_plane: EstimatorReport,
    pub expected_vertices: EstimatorReport,
    pub expected_edges: EstimatorReport,
    pub per_edge_boundary_rate: Vec<EstimatorReport>,
}

/// Result of the edge/vertex ratio identity check.
#[derive(Clone, Debug, Serialize)]
pub struct RatioCheck {
    pub ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone)]
struct CensusCounts {
    full: u64,
    salient: u64,
    degenerate: u64,
    boundary: Vec<u64>,
}

impl CensusCounts {
    fn new(k: usize) -> Self {
        Self { full: 0, salient: 0, degenerate: 0, boundary: vec![0; k] }
    }

    fn merge(mut self, other: Self) -> Self {
        self.full += other.full;
        self.salient += other.salient;
        self.degenerate += other.degenerate;
        for (a, b) in self.boundary.iter_mut().zip(other.boundary) {
            *a += b;
        }
        self
    }
}

/// Fold per-index records into an accumulator; parallel when the `parallel`
/// feature is on. The merge must be commutative and associative (integer
/// sums here), which keeps the result independent of the split.
fn accumulate<T, I, F, M>(n_samples: u64, init: I, step: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, u64) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_samples)
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                step(&mut acc, i);
                acc
            })
            .reduce(&init, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        let mut acc = init();
        for i in 0..n_samples {
            step(&mut acc, i);
        }
        acc
    }
}

/// Sum an integer pair over sample indices, in parallel when enabled.
pub(crate) fn accumulate_pair<F>(n_samples: u64, record: F) -> (u64, u64)
where
    F: Fn(u64) -> (u64, u64) + Sync + Send,
{
    accumulate(
        n_samples,
        || (0u64, 0u64),
        |acc, i| {
            let (a, b) = record(i);
            acc.0 += a;
            acc.1 += b;
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )
}

/// Classify `n_samples` random shadows of the cone and aggregate the census.
///
/// Degenerate samples are counted and excluded from every numerator and
/// denominator; a degenerate fraction above 1% aborts the run.
pub fn run_cone_estimator(cone: &Cone, n_samples: u64, seed: u64) -> Result<ConeCensus> {
    run_cone_estimator_eps(cone, n_samples, seed, DEFAULT_CLASSIFY_EPS)
}

pub fn run_cone_estimator_eps(
    cone: &Cone,
    n_samples: u64,
    seed: u64,
    eps: f64,
) -> Result<ConeCensus> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n_samples, min: MIN_SAMPLES });
    }
    let k = cone.generator_count();
    let counts = accumulate(
        n_samples,
        || CensusCounts::new(k),
        |acc, i| {
            let u = unit_vector_at(seed, i, 3).expect("dim 3 is valid");
            match cone.classify_projection_eps(&u, eps) {
                ProjectionOutcome::FullPlane => acc.full += 1,
                ProjectionOutcome::SalientCone { boundary_generators } => {
                    acc.salient += 1;
                    for g in boundary_generators {
                        acc.boundary[g] += 1;
                    }
                }
                ProjectionOutcome::Degenerate => acc.degenerate += 1,
            }
        },
        CensusCounts::merge,
    );
    if counts.degenerate as f64 > MAX_DEGENERATE_FRACTION * n_samples as f64 {
        return Err(Error::ExcessiveDegeneracy {
            degenerate: counts.degenerate,
            samples: n_samples,
        });
    }
    let d = counts.degenerate;
    Ok(ConeCensus {
        p_full_plane: EstimatorReport::from_count(counts.full, n_samples, d, seed, 1.0, 0.0),
        expected_vertices: EstimatorReport::from_count(
            counts.salient,
            n_samples,
            d,
            seed,
            1.0,
            0.0,
        ),
        expected_edges: EstimatorReport::from_count(counts.salient, n_samples, d, seed, 2.0, 0.0),
        per_edge_boundary_rate: counts
            .boundary
            .into_iter()
            .map(|c| EstimatorReport::from_count(c, n_samples, d, seed, 1.0, 0.0))
            .collect(),
    })
}

/// Recover the apex solid angle from the vertex rate:
/// `alpha = 2 pi (1 - E[vertices])`.
pub fn solid_angle_from_vertex_rate(census: &ConeCensus) -> EstimatorReport {
    let v = &census.expected_vertices;
    let two_pi = 2.0 * std::f64::consts::PI;
    EstimatorReport::from_estimate(
        two_pi * (1.0 - v.estimate),
        two_pi * v.stderr,
        v.samples,
        v.degenerate,
        v.seed,
    )
}

/// Check the per-sample census law `E[edges] = 2 E[vertices]` on the
/// aggregated estimates. Up to degenerate exclusions the ratio is exact, so
/// it must equal 2 whenever the degenerate count is zero.
pub fn edge_vertex_ratio_check(census: &ConeCensus) -> Result<RatioCheck> {
    let v = &census.expected_vertices;
    let e = &census.expected_edges;
    if v.estimate <= 0.0 {
        return Err(Error::NonPositiveVertexRate);
    }
    let ratio = e.estimate / v.estimate;
    let rel = ((e.stderr / e.estimate).powi(2) + (v.stderr / v.estimate).powi(2)).sqrt();
    let tolerance = 4.0 * ratio.abs() * rel;
    Ok(RatioCheck { ratio, tolerance, pass: (ratio - 2.0).abs() <= tolerance })
}

/// Estimate the surface measure of `{ u : oracle(u) }` on `S^(dim-1)`:
/// the accepted fraction times the sphere area `dim * omega_dim`.
pub fn estimate_solid_angle_at_point<F>(
    oracle: F,
    dim: usize,
    n_samples: u64,
    seed: u64,
) -> Result<EstimatorReport>
where
    F: Fn(&UnitVector) -> bool + Sync + Send,
{
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    if n_samples < MIN_SAMPLES {
        return Err(Error::TooFewSamples { got: n_samples, min: MIN_SAMPLES });
    }
    let accepted = accumulate(
        n_samples,
        || 0u64,
        |acc, i| {
            let u = unit_vector_at(seed, i, dim).expect("dim >= 2");
            if oracle(&u) {
                *acc += 1;
            }
        },
        |a, b| a + b,
    );
    let area = sphere_surface_area(dim)?;
    Ok(EstimatorReport::from_count(accepted, n_samples, 0, seed, area, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn octant() -> Cone {
        Cone::from_coords(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()
    }

    const N: u64 = 200_000;

    #[test]
    fn octant_census_matches_exact_values() {
        let census = run_cone_estimator(&octant(), N, 7).unwrap();
        assert!(census.p_full_plane.covers(0.25, 4.0));
        assert!(census.expected_vertices.covers(0.75, 4.0));
        assert!(census.expected_edges.covers(1.5, 4.0));
        for rate in &census.per_edge_boundary_rate {
            // each octant edge: 1 - (pi/2)/pi = 1/2
            assert!(rate.covers(0.5, 4.0));
        }
        let alpha = solid_angle_from_vertex_rate(&census);
        assert!(alpha.covers(PI / 2.0, 4.0));
        assert!((alpha.stderr - 2.0 * PI * census.p_full_plane.stderr).abs() < 1e-15);

        let ci = census.p_full_plane.ci95;
        let est = census.p_full_plane.estimate;
        let se = census.p_full_plane.stderr;
        assert!((ci[0] - (est - 1.96 * se)).abs() < 1e-15);
        assert!((ci[1] - (est + 1.96 * se)).abs() < 1e-15);
    }

    #[test]
    fn ratio_is_exactly_two_without_degenerates() {
        let census = run_cone_estimator(&octant(), N, 11).unwrap();
        let check = edge_vertex_ratio_check(&census).unwrap();
        assert!(check.pass);
        if census.p_full_plane.degenerate == 0 {
            assert_eq!(check.ratio, 2.0);
        }
    }

    #[test]
    fn corrupted_census_fails_ratio_check() {
        let mut census = run_cone_estimator(&octant(), N, 11).unwrap();
        census.expected_edges.estimate *= 1.1;
        let check = edge_vertex_ratio_check(&census).unwrap();
        assert!(!check.pass);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_cone_estimator(&octant(), 50_000, 99).unwrap();
        let b = run_cone_estimator(&octant(), 50_000, 99).unwrap();
        assert_eq!(a, b);
        let c = run_cone_estimator(&octant(), 50_000, 100).unwrap();
        assert_ne!(a.p_full_plane.estimate, c.p_full_plane.estimate);
    }

    #[test]
    fn solid_angle_at_point_octant_and_halfspace() {
        let octant_oracle = |u: &UnitVector| u.coords().iter().all(|&c| c >= 0.0);
        let r = estimate_solid_angle_at_point(octant_oracle, 3, N, 13).unwrap();
        assert!(r.covers(PI / 2.0, 4.0), "estimate {} stderr {}", r.estimate, r.stderr);

        let half = |u: &UnitVector| u[2] >= 0.0;
        let r = estimate_solid_angle_at_point(half, 3, N, 13).unwrap();
        assert!(r.covers(2.0 * PI, 4.0));
    }

    #[test]
    fn stderr_halves_when_samples_quadruple() {
        let small = run_cone_estimator(&octant(), 40_000, 3).unwrap();
        let large = run_cone_estimator(&octant(), 160_000, 3).unwrap();
        let ratio = small.p_full_plane.stderr / large.p_full_plane.stderr;
        assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
    }

    #[test]
    fn rejects_too_few_samples_and_excessive_degeneracy() {
        assert!(matches!(run_cone_estimator(&octant(), 50, 1), Err(Error::TooFewSamples { .. })));
        // an absurd margin forces most samples into the degenerate bucket
        assert!(matches!(
            run_cone_estimator_eps(&octant(), 1000, 1, 0.5),
            Err(Error::ExcessiveDegeneracy { .. })
        ));
    }

    #[test]
    fn invalid_dimension_rejected() {
        let r = estimate_solid_angle_at_point(|_| true, 1, 1000, 0);
        assert!(matches!(r, Err(Error::InvalidDimension { .. })));
    }

    #[test]
    fn report_json_shape() {
        let census = run_cone_estimator(&octant(), 1000, 5).unwrap();
        let text = serde_json::to_string(&census.p_full_plane).unwrap();
        for key in
            ["\"samples\"", "\"degenerate\"", "\"estimate\"", "\"stderr\"", "\"ci95\"", "\"seed\""]
        {
            assert!(text.contains(key), "missing {key} in {text}");
        }
    }
}
