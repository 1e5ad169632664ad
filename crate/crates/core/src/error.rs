use thiserror::Error;

/// Errors raised by body construction, geometric queries and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate convex hull (all points collinear or coincident)")]
    DegenerateHull,
    #[error("point {0} is not a vertex of the convex hull")]
    NonExtremePoint(usize),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular linear map")]
    SingularMap,
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("origin is not in the interior of the body")]
    OriginNotInterior,
    #[error("centroid is not at the origin (offset {0:e})")]
    CentroidNotAtOrigin(f64),
    #[error("line misses the body")]
    ChordMiss,
    #[error("line only touches the body boundary (zero-length chord)")]
    ChordTangent,
    #[error("direction vector has zero length")]
    ZeroDirection,
    #[error("a triangle admits no basic shadow system")]
    TriangleHasNoBasicSystem,
    #[error("vertex index {index} out of range for a {len}-gon")]
    VertexIndex { index: usize, len: usize },
    #[error("parameter t = {t} outside the system range [{min}, {max}]")]
    ParameterOutOfRange { t: f64, min: f64, max: f64 },
    #[error("interior-point iteration did not converge (final gap {gap:e})")]
    NoConvergence { gap: f64 },
    #[error("invalid functional: {0}")]
    InvalidFunctional(String),
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("grid too sparse: need at least {needed} usable points, got {got}")]
    GridTooSparse { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed body file: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
