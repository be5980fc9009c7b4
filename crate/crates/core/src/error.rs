use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction vector is zero or not finite")]
    ZeroDirection,

    #[error("support value {value} <= 0 in direction {direction:?}: reference center is not interior")]
    NonPositiveSupport { value: f64, direction: [f64; 3] },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("superellipsoid exponent {0} must be even and >= 2")]
    OddExponent(u32),

    #[error("invalid quadrature order: {0}")]
    InvalidOrder(String),

    #[error("integrand is not finite at node {node:?}")]
    NonFiniteIntegrand { node: [f64; 3] },

    #[error("excision radius {epsilon} is not below the minimum support value {min_support}")]
    ExcisionTooLarge { epsilon: f64, min_support: f64 },

    #[error("no Monte Carlo sample out of {samples} landed inside the pedal body")]
    ZeroAcceptance { samples: u64 },

    #[error("degenerate metric at parameters ({u}, {v}): det g = {det}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },

    #[error("edge {edge} has dihedral angle {angle} outside (0, pi]")]
    BadDihedral { edge: usize, angle: f64 },

    #[error("support value {value} exceeds the sanity cap {cap}")]
    Unbounded { value: f64, cap: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("face {face} references vertex {index}, but the mesh has {vertex_count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        vertex_count: usize,
    },

    #[error("mesh is not convex: vertex {vertex} lies {distance} outside the plane of face {face}")]
    NonConvexMesh { face: usize, vertex: usize, distance: f64 },

    #[error("edge ({a}, {b}) is shared by {count} faces, expected 2")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("face {face} is not planar (deviation {deviation})")]
    NonPlanarFace { face: usize, deviation: f64 },

    #[error("{method} produced {value}, expected a finite positive value")]
    InvalidValue { method: String, value: f64 },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
