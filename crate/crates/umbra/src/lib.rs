//! Geometric-probability verification toolkit.
//!
//! The crate computes solid angles of polyhedral cones, simplices, and
//! convex polytopes two independent ways and checks that they agree:
//!
//! * exactly, through spherical trigonometry (angle excess, lune measures,
//!   an L'Huilier oracle, and the alternating sum over a face lattice), and
//! * statistically, by classifying shadows of the bodies under random
//!   orthogonal projections with seeded, counter-based Monte Carlo.
//!
//! The headline identity: a salient cone's shadow on a random hyperplane has
//! one vertex and two edges unless the direction pierces the cone, so the
//! expected vertex and edge counts of the shadow pin the apex solid angle to
//! the angle excess of the cone's spherical cross-section.

pub mod cone;
pub mod error;
pub mod estimator;
pub mod geom;
pub mod gram;
mod linalg;
pub mod sample;
pub mod simplex;
pub mod spherical;

pub use cone::{Cone, Membership, MembershipClass, ProjectionExpectations, ProjectionOutcome};
pub use error::{Error, Result};
pub use estimator::{
    edge_vertex_ratio_check, estimate_solid_angle_at_point, run_cone_estimator,
    run_cone_estimator_eps, solid_angle_from_vertex_rate, ConeCensus, EstimatorReport, RatioCheck,
};
pub use geom::{
    complement_basis, complement_coordinates, project_to_complement, sphere_surface_area,
    unit_ball_volume, UnitVector, Vector,
};
pub use gram::{AngleMode, Face, FaceAngle, Facet, GramEulerReport, PolytopeFaceLattice};
pub use sample::{sub_seed, unit_vector_at, SampleStream};
pub use simplex::{ProjectionIdentityReport, ShadowVerdict, SimplexN};
pub use spherical::{
    edge_lune_measure, excess_area, inner_angles, lhuilier_solid_angle, InnerAngles,
    SphericalTriangle,
};
