//! Browser demo bindings. Three interactive operations, all JSON-in /
//! JSON-out strings so the page stays a single static file:
//!
//! * [`cone_report`] - exact solid angle, oracle check, shadow expectations
//! * [`classify_shadow`] - one projection, with 2-D ray coordinates to draw
//! * [`run_census`] - seeded Monte Carlo census with the identity checks
//!
//! Errors come back as `{ "error": "..." }` envelopes rather than thrown
//! exceptions, which keeps the JS side to a JSON.parse.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use umbra::{
    complement_basis, edge_vertex_ratio_check, lhuilier_solid_angle, run_cone_estimator_eps,
    solid_angle_from_vertex_rate, Cone, ConeCensus, EstimatorReport, MembershipClass,
    ProjectionExpectations, ProjectionOutcome, RatioCheck, SphericalTriangle,
};

fn error_json(message: impl std::fmt::Display) -> String {
    #[derive(Serialize)]
    struct ErrorEnvelope {
        error: String,
    }
    serde_json::to_string(&ErrorEnvelope { error: message.to_string() }).unwrap()
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialization cannot fail")
}

#[derive(Serialize)]
struct ConeReport {
    generator_count: usize,
    generators: Vec<[f64; 3]>,
    inner_angles: Vec<f64>,
    solid_angle: f64,
    solid_angle_oracle: f64,
    oracle_difference: f64,
    expected_vertices: f64,
    expected_edges: f64,
    p_full_plane: f64,
}

fn coords3(v: &umbra::UnitVector) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

/// Exact report for a cone given as `{ "generators": [[x,y,z], ...] }`.
#[wasm_bindgen]
pub fn cone_report(cone_json: &str) -> String {
    let cone = match Cone::from_json(cone_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let g = cone.generators();
    let mut oracle = 0.0;
    for i in 1..g.len() - 1 {
        let tri = match SphericalTriangle::new(g[0].clone(), g[i].clone(), g[i + 1].clone()) {
            Ok(t) => t,
            Err(e) => return error_json(e),
        };
        match lhuilier_solid_angle(&tri) {
            Ok(a) => oracle += a,
            Err(e) => return error_json(e),
        }
    }
    let alpha = cone.solid_angle_excess();
    let e = cone.exact_projection_expectations();
    render(&ConeReport {
        generator_count: cone.generator_count(),
        generators: g.iter().map(coords3).collect(),
        inner_angles: cone.inner_angles(),
        solid_angle: alpha,
        solid_angle_oracle: oracle,
        oracle_difference: (alpha - oracle).abs(),
        expected_vertices: e.expected_vertices,
        expected_edges: e.expected_edges,
        p_full_plane: e.p_full_plane,
    })
}

#[derive(Serialize)]
struct ShadowView {
    direction: [f64; 3],
    kind: String,
    membership: String,
    membership_negated: String,
    boundary_generators: Vec<usize>,
    vertex_count: Option<u32>,
    edge_count: Option<u32>,
    /// Orthonormal basis of the projection plane.
    basis: [[f64; 3]; 2],
    /// Projected generators in basis coordinates, one [x, y] per generator.
    rays: Vec<[f64; 2]>,
}

fn class_name(class: MembershipClass) -> String {
    format!("{class:?}")
}

/// Classify the shadow for direction `(x, y, z)` and return everything the
/// page needs to draw the projected fan.
#[wasm_bindgen]
pub fn classify_shadow(cone_json: &str, x: f64, y: f64, z: f64, epsilon: f64) -> String {
    let cone = match Cone::from_json(cone_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let u = match umbra::Vector::new(vec![x, y, z]).and_then(|v| v.normalized()) {
        Ok(u) => u,
        Err(e) => return error_json(e),
    };
    let eps = if epsilon > 0.0 && epsilon < 1e-3 { epsilon } else { 1e-9 };
    let outcome = cone.classify_projection_eps(&u, eps);
    let basis = match complement_basis(&u) {
        Ok(b) => b,
        Err(e) => return error_json(e),
    };
    let rays: Vec<[f64; 2]> =
        cone.generators().iter().map(|g| [g.dot(&basis[0]), g.dot(&basis[1])]).collect();
    let (kind, boundary) = match &outcome {
        ProjectionOutcome::FullPlane => ("FullPlane".to_string(), Vec::new()),
        ProjectionOutcome::SalientCone { boundary_generators } => {
            ("SalientCone".to_string(), boundary_generators.to_vec())
        }
        ProjectionOutcome::Degenerate => ("Degenerate".to_string(), Vec::new()),
    };
    render(&ShadowView {
        direction: coords3(&u),
        kind,
        membership: class_name(cone.direction_membership_eps(&u, eps).class),
        membership_negated: class_name(cone.direction_membership_eps(&u.negated(), eps).class),
        boundary_generators: boundary,
        vertex_count: outcome.vertex_count(),
        edge_count: outcome.edge_count(),
        basis: [coords3(&basis[0]), coords3(&basis[1])],
        rays,
    })
}

#[derive(Serialize)]
struct CensusView {
    samples: u64,
    seed: u64,
    census: ConeCensus,
    solid_angle_estimate: EstimatorReport,
    solid_angle_exact: f64,
    exact: ProjectionExpectations,
    ratio_check: RatioCheck,
    pass: bool,
}

/// Seeded Monte Carlo census. `samples` is clamped to 5 million to keep the
/// page responsive.
#[wasm_bindgen]
pub fn run_census(cone_json: &str, samples: u32, seed: u32, epsilon: f64) -> String {
    let cone = match Cone::from_json(cone_json) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let n = (samples as u64).min(5_000_000);
    let eps = if epsilon > 0.0 && epsilon < 1e-3 { epsilon } else { 1e-9 };
    let census = match run_cone_estimator_eps(&cone, n, seed as u64, eps) {
        Ok(c) => c,
        Err(e) => return error_json(e),
    };
    let alpha = solid_angle_from_vertex_rate(&census);
    let exact = cone.exact_projection_expectations();
    let alpha_exact = cone.solid_angle_excess();
    let ratio = match edge_vertex_ratio_check(&census) {
        Ok(r) => r,
        Err(e) => return error_json(e),
    };
    let pass = alpha.covers(alpha_exact, 4.0)
        && census.p_full_plane.covers(exact.p_full_plane, 4.0)
        && ratio.pass;
    render(&CensusView {
        samples: n,
        seed: seed as u64,
        census,
        solid_angle_estimate: alpha,
        solid_angle_exact: alpha_exact,
        exact,
        ratio_check: ratio,
        pass,
    })
}

/// Generator sets for the page's preset picker.
#[wasm_bindgen]
pub fn preset_cone(name: &str) -> String {
    let generators: Vec<[f64; 3]> = match name {
        "octant" => vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        "tetra-corner" => {
            let s3 = 3.0f64.sqrt();
            let s6 = 6.0f64.sqrt();
            vec![[1.0, 0.0, 0.0], [0.5, s3 / 2.0, 0.0], [0.5, s3 / 6.0, s6 / 3.0]]
        }
        "square" => vec![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]],
        "pentagon" => (0..5)
            .map(|i| {
                let phi = std::f64::consts::TAU * i as f64 / 5.0;
                [0.6 * phi.cos(), 0.6 * phi.sin(), 0.8]
            })
            .collect(),
        _ => return error_json(format!("unknown preset {name:?}")),
    };
    #[derive(Serialize)]
    struct Preset {
        generators: Vec<[f64; 3]>,
    }
    render(&Preset { generators })
}
