//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least {min}, got {dim}")]
    InvalidDimension { dim: usize, min: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("vector norm {norm} is not within 1e-12 of 1")]
    NotUnit { norm: f64 },

    #[error("cannot normalize a zero vector")]
    ZeroVector,

    #[error("degenerate spherical triangle: |det| = {det:e} below threshold")]
    DegenerateTriangle { det: f64 },

    #[error("numerical degeneracy: tangent argument {value:e} is negative")]
    NumericalDegeneracy { value: f64 },

    #[error("angle {value} outside open interval ({low}, {high})")]
    AngleOutOfRange { value: f64, low: f64, high: f64 },

    #[error("cone needs at least 3 generators, got {count}")]
    TooFewGenerators { count: usize },

    #[error("degenerate cone: generators are coplanar (|det| = {det:e})")]
    DegenerateCone { det: f64 },

    #[error("cone is not salient: no direction has positive margin against every generator")]
    NotSalient,

    #[error("redundant generator at input index {index}: it lies in the cone of the others")]
    RedundantGenerator { index: usize },

    #[error("generators cannot be cyclically ordered: generator {index} projects onto the ordering axis")]
    UnorderableGenerators { index: usize },

    #[error("degenerate simplex: edge-vector determinant {det:e} below threshold")]
    DegenerateSimplex { det: f64 },

    #[error("an n-simplex in {dim}-space needs {expected} vertices, got {got}")]
    VertexCountMismatch { dim: usize, expected: usize, got: usize },

    #[error("vertex index {index} out of range for {count} vertices")]
    VertexIndexOutOfRange { index: usize, count: usize },

    #[error("face index {index} out of range for {count} faces")]
    FaceNotInLattice { index: usize, count: usize },

    #[error("invalid face lattice: {reason}")]
    InvalidLattice { reason: String },

    #[error("exact mode is not available for a face of dimension {face_dim} in a {dim}-polytope")]
    ExactModeUnsupported { face_dim: usize, dim: usize },

    #[error("estimator needs at least {min} samples, got {got}")]
    TooFewSamples { got: u64, min: u64 },

    #[error(
        "excessive degeneracy: {degenerate} of {samples} samples within the classification margin"
    )]
    ExcessiveDegeneracy { degenerate: u64, samples: u64 },

    #[error("estimate of expected vertex count is not positive")]
    NonPositiveVertexRate,

    #[error("singular linear system")]
    SingularSystem,

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        // serde_json messages carry "at line L column C".
        Error::Parse(err.to_string())
    }
}
