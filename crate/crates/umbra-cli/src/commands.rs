//! Subcommand implementations. Each returns the rendered text report, the
//! JSON report, and an overall pass flag; identity failures flip the flag
//! rather than erroring, input problems bubble up as `Err`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use umbra::{
    edge_vertex_ratio_check, lhuilier_solid_angle, run_cone_estimator_eps,
    solid_angle_from_vertex_rate, AngleMode, Cone, ConeCensus, EstimatorReport, GramEulerReport,
    Membership, PolytopeFaceLattice, ProjectionExpectations, ProjectionIdentityReport,
    ProjectionOutcome, RatioCheck, SimplexN, SphericalTriangle, Vector,
};

use crate::csv::{write_convergence_csv, ConvergenceRow};

pub struct CmdOutput {
    pub text: String,
    pub json: String,
    pub pass: bool,
}

type CmdResult = Result<CmdOutput, String>;

/// Load a scene: normally a file path, but an argument that starts with `{`
/// is taken as an inline JSON scene.
fn read_scene(path: &Path) -> Result<String, String> {
    if let Some(text) = path.to_str() {
        if text.trim_start().starts_with('{') {
            return Ok(text.to_string());
        }
    }
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn render<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

/// Exact solid angle with the side-length oracle: the cone's spherical
/// polygon is fanned into triangles from its first generator.
fn oracle_solid_angle(cone: &Cone) -> Result<f64, String> {
    let g = cone.generators();
    let mut total = 0.0;
    for i in 1..g.len() - 1 {
        let tri = SphericalTriangle::new(g[0].clone(), g[i].clone(), g[i + 1].clone())
            .map_err(|e| format!("oracle triangulation failed: {e}"))?;
        total += lhuilier_solid_angle(&tri).map_err(|e| format!("oracle failed: {e}"))?;
    }
    Ok(total)
}

#[derive(Serialize)]
struct ExcessReport {
    command: &'static str,
    input: String,
    generator_count: usize,
    generators: Vec<Vec<f64>>,
    inner_angles: Vec<f64>,
    solid_angle_excess: f64,
    solid_angle_oracle: f64,
    oracle_difference: f64,
    expectations: ProjectionExpectations,
    identity_residual: f64,
    pass: bool,
}

pub fn excess(input: &Path) -> CmdResult {
    let cone = Cone::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let alpha = cone.solid_angle_excess();
    let oracle = oracle_solid_angle(&cone)?;
    let expectations = cone.exact_projection_expectations();
    let residual = (expectations.expected_edges - 2.0 * expectations.expected_vertices).abs();
    let report = ExcessReport {
        command: "excess",
        input: input.display().to_string(),
        generator_count: cone.generator_count(),
        generators: cone.generators().iter().map(|g| g.coords().to_vec()).collect(),
        inner_angles: cone.inner_angles(),
        solid_angle_excess: alpha,
        solid_angle_oracle: oracle,
        oracle_difference: (alpha - oracle).abs(),
        expectations,
        identity_residual: residual,
        pass: (alpha - oracle).abs() <= 1e-9 && residual <= 1e-12,
    };

    let mut text = String::new();
    let _ = writeln!(text, "cone: {} generators ({})", report.generator_count, input.display());
    for (i, theta) in report.inner_angles.iter().enumerate() {
        let _ = writeln!(text, "  inner angle {i}:       {theta:.9} rad");
    }
    let _ = writeln!(text, "solid angle (excess):  {:.9} sr", report.solid_angle_excess);
    let _ = writeln!(text, "solid angle (oracle):  {:.9} sr", report.solid_angle_oracle);
    let _ = writeln!(text, "oracle difference:     {:.3e}", report.oracle_difference);
    let _ = writeln!(text, "E[vertices]:           {:.9}", report.expectations.expected_vertices);
    let _ = writeln!(text, "E[edges]:              {:.9}", report.expectations.expected_edges);
    let _ = writeln!(text, "P[full plane]:         {:.9}", report.expectations.p_full_plane);
    let _ = writeln!(text, "identity residual:     {:.3e}", report.identity_residual);
    let _ = writeln!(text, "verdict: {}", verdict(report.pass));
    Ok(CmdOutput { text, json: render(&report), pass: report.pass })
}

#[derive(Serialize)]
struct ProjectReport {
    command: &'static str,
    input: String,
    direction: Vec<f64>,
    epsilon: f64,
    membership: Membership,
    membership_negated: Membership,
    outcome: ProjectionOutcome,
    vertex_count: Option<u32>,
    edge_count: Option<u32>,
}

pub fn project(input: &Path, direction: [f64; 3], epsilon: f64) -> CmdResult {
    let cone = Cone::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let u = Vector::from_slice(&direction)
        .and_then(|v| v.normalized())
        .map_err(|e| format!("bad direction: {e}"))?;
    let outcome = cone.classify_projection_eps(&u, epsilon);
    let report = ProjectReport {
        command: "project",
        input: input.display().to_string(),
        direction: u.coords().to_vec(),
        epsilon,
        membership: cone.direction_membership_eps(&u, epsilon),
        membership_negated: cone.direction_membership_eps(&u.negated(), epsilon),
        vertex_count: outcome.vertex_count(),
        edge_count: outcome.edge_count(),
        outcome,
    };

    let mut text = String::new();
    let _ = writeln!(text, "cone: {} generators ({})", cone.generator_count(), input.display());
    let _ = writeln!(
        text,
        "direction:  [{:.9}, {:.9}, {:.9}]",
        report.direction[0], report.direction[1], report.direction[2]
    );
    let _ = writeln!(text, "membership of  u: {:?}", report.membership.class);
    if let Some(t) = report.membership.coefficients {
        let _ = writeln!(text, "  coefficients: [{:.9}, {:.9}, {:.9}]", t[0], t[1], t[2]);
    }
    let _ = writeln!(text, "membership of -u: {:?}", report.membership_negated.class);
    match &report.outcome {
        ProjectionOutcome::FullPlane => {
            let _ = writeln!(text, "shadow: full plane (0 vertices, 0 edges)");
        }
        ProjectionOutcome::SalientCone { boundary_generators } => {
            let _ = writeln!(
                text,
                "shadow: salient cone (1 vertex, 2 edges), boundary generators {boundary_generators:?}"
            );
        }
        ProjectionOutcome::Degenerate => {
            let _ = writeln!(text, "shadow: degenerate (within epsilon of a boundary)");
        }
    }
    Ok(CmdOutput { text, json: render(&report), pass: true })
}

#[derive(Serialize)]
struct McConeReport {
    command: &'static str,
    input: String,
    samples: u64,
    seed: u64,
    epsilon: f64,
    census: ConeCensus,
    solid_angle_estimate: EstimatorReport,
    solid_angle_exact: f64,
    ratio_check: RatioCheck,
    exact: ProjectionExpectations,
    degenerate_fraction: f64,
    pass: bool,
}

pub fn mc_cone(input: &Path, samples: u64, seed: u64, epsilon: f64) -> CmdResult {
    let cone = Cone::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let census =
        run_cone_estimator_eps(&cone, samples, seed, epsilon).map_err(|e| e.to_string())?;
    let alpha = solid_angle_from_vertex_rate(&census);
    let exact = cone.exact_projection_expectations();
    let alpha_exact = cone.solid_angle_excess();
    let ratio = edge_vertex_ratio_check(&census).map_err(|e| e.to_string())?;
    let angles = cone.inner_angles();
    let edges_cover = census
        .per_edge_boundary_rate
        .iter()
        .zip(&angles)
        .all(|(rate, theta)| rate.covers(1.0 - theta / std::f64::consts::PI, 4.0));
    let degenerate_fraction = census.p_full_plane.degenerate as f64 / samples as f64;
    let pass = alpha.covers(alpha_exact, 4.0)
        && census.p_full_plane.covers(exact.p_full_plane, 4.0)
        && census.expected_vertices.covers(exact.expected_vertices, 4.0)
        && census.expected_edges.covers(exact.expected_edges, 4.0)
        && edges_cover
        && ratio.pass
        && degenerate_fraction <= 1e-4;
    let report = McConeReport {
        command: "mc-cone",
        input: input.display().to_string(),
        samples,
        seed,
        epsilon,
        census,
        solid_angle_estimate: alpha,
        solid_angle_exact: alpha_exact,
        ratio_check: ratio,
        exact,
        degenerate_fraction,
        pass,
    };

    let mut text = String::new();
    let _ = writeln!(text, "cone: {} generators ({})", cone.generator_count(), input.display());
    let _ = writeln!(text, "samples: {samples}   seed: {seed}   epsilon: {epsilon:e}");
    let _ = writeln!(
        text,
        "degenerate samples:    {} (fraction {:.3e})",
        report.census.p_full_plane.degenerate, report.degenerate_fraction
    );
    let line = |label: &str, r: &EstimatorReport, exact: f64| {
        format!(
            "{label} {:.9} +- {:.3e}  (exact {:.9}, ci95 [{:.9}, {:.9}])\n",
            r.estimate, r.stderr, exact, r.ci95[0], r.ci95[1]
        )
    };
    text.push_str(&line("P[full plane]:        ", &report.census.p_full_plane, exact.p_full_plane));
    text.push_str(&line(
        "E[vertices]:          ",
        &report.census.expected_vertices,
        exact.expected_vertices,
    ));
    text.push_str(&line(
        "E[edges]:             ",
        &report.census.expected_edges,
        exact.expected_edges,
    ));
    for (i, (rate, theta)) in report.census.per_edge_boundary_rate.iter().zip(&angles).enumerate() {
        text.push_str(&line(
            &format!("edge {i} boundary rate: "),
            rate,
            1.0 - theta / std::f64::consts::PI,
        ));
    }
    text.push_str(&line("solid angle:          ", &report.solid_angle_estimate, alpha_exact));
    let _ = writeln!(
        text,
        "edge/vertex ratio:     {:.9} (tolerance {:.3e})",
        report.ratio_check.ratio, report.ratio_check.tolerance
    );
    let _ = writeln!(text, "verdict: {}", verdict(report.pass));
    Ok(CmdOutput { text, json: render(&report), pass })
}

#[derive(Serialize)]
struct McSimplexReport {
    command: &'static str,
    input: String,
    dimension: usize,
    samples: u64,
    seed: u64,
    identity: ProjectionIdentityReport,
    pass: bool,
}

pub fn mc_simplex(input: &Path, samples: u64, seed: u64) -> CmdResult {
    let simplex = SimplexN::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let identity = simplex.check_projection_identity(samples, seed).map_err(|e| e.to_string())?;
    let pass = identity.pass;
    let report = McSimplexReport {
        command: "mc-simplex",
        input: input.display().to_string(),
        dimension: simplex.dim(),
        samples,
        seed,
        identity,
        pass,
    };

    let mut text = String::new();
    let _ = writeln!(text, "simplex: dimension {} ({})", report.dimension, input.display());
    let _ = writeln!(text, "samples: {samples} per quantity   seed: {seed}");
    let _ = writeln!(
        text,
        "P[shadow is simplex]:  {:.9} +- {:.3e}",
        report.identity.lhs.estimate, report.identity.lhs.stderr
    );
    let _ = writeln!(
        text,
        "vertex-angle side:     {:.9} +- {:.3e}",
        report.identity.rhs.estimate, report.identity.rhs.stderr
    );
    for (i, angle) in report.identity.vertex_angles.iter().enumerate() {
        let _ = writeln!(
            text,
            "  vertex {i} solid angle: {:.9} +- {:.3e}",
            angle.estimate, angle.stderr
        );
    }
    let _ = writeln!(
        text,
        "difference:            {:.3e} (4 x combined stderr = {:.3e})",
        report.identity.difference.abs(),
        4.0 * report.identity.combined_stderr
    );
    let _ = writeln!(text, "verdict: {}", verdict(pass));
    Ok(CmdOutput { text, json: render(&report), pass })
}

#[derive(Serialize)]
struct GramEulerCmdReport {
    command: &'static str,
    input: String,
    dimension: usize,
    mode: &'static str,
    samples: u64,
    seed: u64,
    report: GramEulerReport,
    pass: bool,
}

pub fn gram_euler(input: &Path, mode: AngleMode, samples: u64, seed: u64) -> CmdResult {
    let lattice = PolytopeFaceLattice::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let report = lattice.gram_euler_sum(mode, samples, seed).map_err(|e| e.to_string())?;
    let pass = report.pass;
    let cmd_report = GramEulerCmdReport {
        command: "gram-euler",
        input: input.display().to_string(),
        dimension: lattice.dim(),
        mode: match mode {
            AngleMode::Exact => "exact",
            AngleMode::MonteCarlo => "mc",
        },
        samples,
        seed,
        report,
        pass,
    };

    let mut text = String::new();
    let _ = writeln!(
        text,
        "polytope: dimension {}, f-vector {:?} ({})",
        cmd_report.dimension,
        lattice.f_vector(),
        input.display()
    );
    let _ = writeln!(text, "mode: {}   samples/face: {samples}   seed: {seed}", cmd_report.mode);
    let r = &cmd_report.report;
    let _ = writeln!(text, "alternating sum:       {:.9}", r.alternating_sum);
    let _ = writeln!(text, "target:                {:.9}", r.target);
    let _ = writeln!(
        text,
        "deviation:             {:.3e} (tolerance {:.3e}, combined stderr {:.3e})",
        (r.alternating_sum - r.target).abs(),
        r.tolerance,
        r.combined_stderr
    );
    let _ = writeln!(text, "verdict: {}", verdict(pass));
    Ok(CmdOutput { text, json: render(&cmd_report), pass })
}

#[derive(Serialize)]
struct ConvergenceReport {
    command: &'static str,
    input: String,
    seed: u64,
    rows: Vec<ConvergenceRow>,
    stderr_monotone: bool,
    pass: bool,
}

pub fn convergence(input: &Path, samples: u64, seed: u64, csv_out: Option<&Path>) -> CmdResult {
    let cone = Cone::from_json(&read_scene(input)?).map_err(|e| e.to_string())?;
    let mut series = Vec::new();
    let mut n = 1000u64;
    while n <= samples {
        series.push(n);
        n = n.saturating_mul(10);
    }
    if series.last() != Some(&samples) {
        series.push(samples);
    }
    let mut rows = Vec::with_capacity(series.len());
    for &n in &series {
        let census = run_cone_estimator_eps(&cone, n, seed, 1e-9).map_err(|e| e.to_string())?;
        let alpha = solid_angle_from_vertex_rate(&census);
        rows.push(ConvergenceRow {
            samples: n,
            estimate: alpha.estimate,
            stderr: alpha.stderr,
            ci95_low: alpha.ci95[0],
            ci95_high: alpha.ci95[1],
        });
    }
    let stderr_monotone = rows.windows(2).all(|w| w[1].stderr < w[0].stderr);
    let report = ConvergenceReport {
        command: "convergence",
        input: input.display().to_string(),
        seed,
        rows,
        stderr_monotone,
        pass: stderr_monotone,
    };
    if let Some(path) = csv_out {
        write_convergence_csv(&report.rows, path)?;
    }

    let mut text = String::new();
    let _ = writeln!(text, "cone: {} generators ({})", cone.generator_count(), input.display());
    let _ = writeln!(text, "{:>10}  {:>14}  {:>12}", "samples", "estimate", "stderr");
    for row in &report.rows {
        let _ =
            writeln!(text, "{:>10}  {:>14.9}  {:>12.3e}", row.samples, row.estimate, row.stderr);
    }
    if let Some(path) = csv_out {
        let _ = writeln!(text, "csv written to {}", path.display());
    }
    let _ = writeln!(text, "verdict: {}", verdict(report.pass));
    Ok(CmdOutput { text, json: render(&report), pass: report.pass })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
