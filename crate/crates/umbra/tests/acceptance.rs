//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers. Run with `cargo test --test acceptance -- --nocapture`
//! to see the report.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{random_cone, random_cone_k3, random_simplex};
use umbra::{
    edge_vertex_ratio_check, lhuilier_solid_angle, run_cone_estimator,
    solid_angle_from_vertex_rate, AngleMode, Cone, PolytopeFaceLattice, SampleStream, SimplexN,
    SphericalTriangle,
};

const ACOS_THIRD: f64 = 1.2309594173407747; // acos(1/3)
const ACOS_NEG_THIRD: f64 = 1.9106332362490186; // acos(-1/3)

fn octant() -> Cone {
    Cone::from_coords(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()
}

fn tetra_corner_cone() -> Cone {
    let s3 = 3.0f64.sqrt();
    let s6 = 6.0f64.sqrt();
    Cone::from_coords(&[
        vec![1.0, 0.0, 0.0],
        vec![0.5, s3 / 2.0, 0.0],
        vec![0.5, s3 / 6.0, s6 / 3.0],
    ])
    .unwrap()
}

fn square_cone() -> Cone {
    Cone::from_coords(&[
        vec![1.0, 0.0, 1.0],
        vec![0.0, 1.0, 1.0],
        vec![-1.0, 0.0, 1.0],
        vec![0.0, -1.0, 1.0],
    ])
    .unwrap()
}

fn regular_tetrahedron() -> SimplexN {
    SimplexN::from_coords(&[
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ])
    .unwrap()
}

/// Criterion 1: excess formula vs the L'Huilier oracle on 1000 random
/// 3-generator cones, agreement to 1e-9, under one second.
#[test]
fn criterion_1_excess_formula_vs_oracle() {
    let start = Instant::now();
    let mut stream = SampleStream::new(0x01);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cone = random_cone_k3(&mut stream);
        let g = cone.generators();
        let tri = SphericalTriangle::new(g[0].clone(), g[1].clone(), g[2].clone()).unwrap();
        let oracle = lhuilier_solid_angle(&tri).unwrap();
        let diff = (cone.solid_angle_excess() - oracle).abs();
        worst = worst.max(diff);
        assert!(diff <= 1e-9, "excess vs oracle differ by {diff}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 1 took {elapsed:?}");
    println!("criterion 1: PASS - 1000 cones, max |excess - lhuilier| = {worst:.3e}, {elapsed:?}");
}

/// Criterion 2: octant cone at N = 10^6 - solid angle recovered from the
/// vertex rate within 4 stderr of pi/2, full-plane rate within 4 stderr of
/// 1/4, edge/vertex ratio exactly 2, under ten seconds.
#[test]
fn criterion_2_headline_probabilistic_reproduction() {
    let start = Instant::now();
    let n = 1_000_000;
    let census = run_cone_estimator(&octant(), n, 7).unwrap();
    let alpha = solid_angle_from_vertex_rate(&census);
    assert!(
        alpha.covers(PI / 2.0, 4.0),
        "alpha {} +- {} misses pi/2",
        alpha.estimate,
        alpha.stderr
    );
    assert!(
        census.p_full_plane.covers(0.25, 4.0),
        "p_full {} +- {} misses 1/4",
        census.p_full_plane.estimate,
        census.p_full_plane.stderr
    );
    let ratio = edge_vertex_ratio_check(&census).unwrap();
    assert_eq!(ratio.ratio, 2.0, "edge/vertex ratio must be exactly 2");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 2 took {elapsed:?}");
    println!(
        "criterion 2: PASS - alpha^ = {:.7} (pi/2 = {:.7}, stderr {:.2e}), p_full = {:.7}, ratio = {}, {elapsed:?}",
        alpha.estimate,
        PI / 2.0,
        alpha.stderr,
        census.p_full_plane.estimate,
        ratio.ratio
    );
}

/// Criterion 3: per-edge boundary rates of the tetrahedral corner cone at
/// N = 10^6, each within 4 stderr of 1 - acos(1/3)/pi.
#[test]
fn criterion_3_per_edge_lune_rates() {
    let census = run_cone_estimator(&tetra_corner_cone(), 1_000_000, 3).unwrap();
    let exact = 1.0 - ACOS_THIRD / PI;
    for (i, rate) in census.per_edge_boundary_rate.iter().enumerate() {
        assert!(
            rate.covers(exact, 4.0),
            "edge {i}: rate {} +- {} misses {exact}",
            rate.estimate,
            rate.stderr
        );
    }
    // the same run must also reproduce the expected edge count and the apex
    // solid angle of this cone
    assert!(census.expected_edges.covers(3.0 * exact, 4.0));
    let alpha = solid_angle_from_vertex_rate(&census);
    assert!(alpha.covers(3.0 * ACOS_THIRD - PI, 4.0));
    let rates: Vec<f64> = census.per_edge_boundary_rate.iter().map(|r| r.estimate).collect();
    println!("criterion 3: PASS - edge boundary rates {rates:?} vs exact {exact:.7}");
}

/// Criterion 4: the exact identity E[edges] = 2 E[vertices] holds to 1e-12
/// for 10^4 random cones with 3 to 6 generators.
#[test]
fn criterion_4_exact_identity() {
    let mut stream = SampleStream::new(0x04);
    let mut counter = 0u64;
    let mut worst = 0.0f64;
    for trial in 0..10_000u64 {
        let k = 3 + (trial % 4) as usize;
        let cone = random_cone(&mut stream, k, 0x40 + trial % 7, &mut counter);
        let e = cone.exact_projection_expectations();
        let residual = (e.expected_edges - 2.0 * e.expected_vertices).abs();
        worst = worst.max(residual);
        assert!(residual <= 1e-12, "identity residual {residual} for k = {k}");
    }
    println!("criterion 4: PASS - 10^4 cones, max |E[e] - 2E[v]| = {worst:.3e}");
}

/// Criterion 5: square cone solid angle = 4 acos(-1/3) - 2 pi, matching the
/// two-triangle L'Huilier decomposition to 1e-9 and Monte Carlo within
/// 4 stderr at N = 10^6.
#[test]
fn criterion_5_spherical_polygon_generalization() {
    let cone = square_cone();
    let alpha = cone.solid_angle_excess();
    let formula = 4.0 * ACOS_NEG_THIRD - 2.0 * PI;
    assert!((alpha - formula).abs() <= 1e-9);

    let g = cone.generators();
    let t1 = SphericalTriangle::new(g[0].clone(), g[1].clone(), g[2].clone()).unwrap();
    let t2 = SphericalTriangle::new(g[0].clone(), g[2].clone(), g[3].clone()).unwrap();
    let decomposed = lhuilier_solid_angle(&t1).unwrap() + lhuilier_solid_angle(&t2).unwrap();
    assert!(
        (alpha - decomposed).abs() <= 1e-9,
        "two-triangle decomposition differs by {:.3e}",
        (alpha - decomposed).abs()
    );

    let census = run_cone_estimator(&cone, 1_000_000, 5).unwrap();
    let estimate = solid_angle_from_vertex_rate(&census);
    assert!(
        estimate.covers(alpha, 4.0),
        "MC alpha {} +- {} misses {alpha}",
        estimate.estimate,
        estimate.stderr
    );
    println!(
        "criterion 5: PASS - alpha = {alpha:.7}, two-triangle diff {:.2e}, MC {:.7} +- {:.2e}",
        (alpha - decomposed).abs(),
        estimate.estimate,
        estimate.stderr
    );
}

/// Criterion 6: the projection-probability identity. Regular tetrahedron at
/// N = 10^6 per side; the n = 2 exact case; and 50 random simplices each in
/// dimensions 3, 4, 5 at N = 10^5 passing at least 48 times per dimension.
/// Under two minutes.
#[test]
fn criterion_6_projection_probability_identity() {
    let start = Instant::now();

    let tetra = regular_tetrahedron().check_projection_identity(1_000_000, 0x06).unwrap();
    assert!(
        tetra.pass,
        "tetrahedron: |lhs - rhs| = {} vs 4 x {}",
        tetra.difference.abs(),
        tetra.combined_stderr
    );
    let derived = 0.35095931218364385; // 2 * (4 * (3 acos(1/3) - pi)) / (4 pi)
    assert!(tetra.lhs.covers(derived, 4.0));
    assert!(tetra.rhs.covers(derived, 4.0));

    let triangle = SimplexN::from_coords(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.3, 1.1]])
        .unwrap()
        .check_projection_identity(100_000, 0x06)
        .unwrap();
    assert_eq!(triangle.lhs.estimate, 1.0, "n = 2 lhs must be exactly 1");
    assert_eq!(triangle.lhs.stderr, 0.0);
    assert!(triangle.rhs.covers(1.0, 4.0));
    assert!(triangle.pass);

    let mut stream = SampleStream::new(0x66);
    let mut pass_counts = Vec::new();
    for n in [3usize, 4, 5] {
        let mut passes = 0;
        for trial in 0..50u64 {
            let simplex = random_simplex(&mut stream, n);
            let report = simplex.check_projection_identity(100_000, 600 + trial).unwrap();
            if report.pass {
                passes += 1;
            }
        }
        assert!(passes >= 48, "dimension {n}: only {passes}/50 identity checks passed");
        pass_counts.push((n, passes));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "criterion 6 took {elapsed:?}");
    println!(
        "criterion 6: PASS - tetra lhs {:.5} rhs {:.5}, triangle exact, random simplices {pass_counts:?}, {elapsed:?}",
        tetra.lhs.estimate, tetra.rhs.estimate
    );
}

/// Criterion 7: the alternating-sum identity. 100 random convex polygons
/// exactly at -2 pi; the regular tetrahedron exactly at 4 pi; simplices in
/// dimensions 2..5 by Monte Carlo at 10^5 samples per face. Under two
/// minutes.
#[test]
fn criterion_7_alternating_sum_identity() {
    let start = Instant::now();

    let mut counter = 0u64;
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let k = 3 + (trial % 8) as usize;
        let vertices = common::random_convex_polygon(0x07, &mut counter, k);
        let lattice = PolytopeFaceLattice::polygon(vertices).unwrap();
        let report = lattice.gram_euler_sum(AngleMode::Exact, 0, 0).unwrap();
        let residual = (report.alternating_sum + 2.0 * PI).abs();
        worst = worst.max(residual);
        assert!(residual <= 1e-12, "polygon {trial}: residual {residual}");
    }

    let tetra = PolytopeFaceLattice::build_simplex_lattice(&regular_tetrahedron()).unwrap();
    let exact = tetra.gram_euler_sum(AngleMode::Exact, 0, 0).unwrap();
    assert!(exact.pass);
    assert!((exact.alternating_sum - 4.0 * PI).abs() <= 1e-9);

    let mut stream = SampleStream::new(0x77);
    let mut mc_sums = Vec::new();
    for n in [2usize, 3, 4, 5] {
        let simplex = random_simplex(&mut stream, n);
        let lattice = PolytopeFaceLattice::build_simplex_lattice(&simplex).unwrap();
        let report =
            lattice.gram_euler_sum(AngleMode::MonteCarlo, 100_000, 700 + n as u64).unwrap();
        assert!(
            report.pass,
            "dimension {n}: |sum - target| = {} vs tolerance {}",
            (report.alternating_sum - report.target).abs(),
            report.tolerance
        );
        mc_sums.push((n, report.alternating_sum, report.target));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "criterion 7 took {elapsed:?}");
    println!(
        "criterion 7: PASS - polygons max residual {worst:.2e}, tetra sum {:.9}, MC {mc_sums:?}, {elapsed:?}",
        exact.alternating_sum
    );
}

/// Criterion 8: bit-identical reports on 1 and 8 worker threads.
#[test]
fn criterion_8_thread_count_determinism() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let census = run_cone_estimator(&octant(), 1_000_000, 7).unwrap();
            let alpha = solid_angle_from_vertex_rate(&census);
            let mut text = serde_json::to_string_pretty(&census).unwrap();
            text.push('\n');
            text.push_str(&serde_json::to_string_pretty(&alpha).unwrap());
            text
        })
    };
    let single = run(1);
    let eight = run(8);
    assert_eq!(single, eight, "reports differ between 1 and 8 worker threads");
    println!("criterion 8: PASS - {} report bytes identical across thread counts", single.len());
}

/// Criterion 9: the degenerate fraction of criterion 2's run stays at or
/// below 1e-4.
#[test]
fn criterion_9_degeneracy_audit() {
    let n = 1_000_000u64;
    let census = run_cone_estimator(&octant(), n, 7).unwrap();
    let fraction = census.p_full_plane.degenerate as f64 / n as f64;
    assert!(fraction <= 1e-4, "degenerate fraction {fraction}");
    println!(
        "criterion 9: PASS - {} degenerate of {n} samples (fraction {fraction:.1e})",
        census.p_full_plane.degenerate
    );
}
