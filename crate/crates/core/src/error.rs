use thiserror::Error;

/// Errors raised by the constructions and certification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("polytope is unbounded (facet normals do not positively span)")]
    Unbounded,

    #[error("brute-force vertex enumeration refused for {facets} facets in dimension {dim}; supply a combinatorial vertex list")]
    EnumerationTooLarge { facets: usize, dim: usize },

    #[error("vertex candidate {basis:?} violates facet {facet}")]
    CandidateInfeasible { basis: Vec<usize>, facet: usize },

    #[error("origin is not in the interior")]
    OriginNotInterior,

    #[error("convex hull supports dimension at most 4, got {0}")]
    HullDimension(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("viewpoint is not beyond the projection facet")]
    InvalidViewpoint,

    #[error("image {0} is not a face of the surface")]
    NotAFace(String),

    #[error("flag enumeration guard exceeded: {0} flags")]
    GuardExceeded(usize),

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("face {face} is not a planar convex polygon: {reason}")]
    FaceInvalid { face: usize, reason: String },

    #[error("faces {a} and {b} intersect improperly")]
    FacesIntersect { a: usize, b: usize },

    #[error("not a closed connected orientable surface: {0}")]
    NotSurface(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
