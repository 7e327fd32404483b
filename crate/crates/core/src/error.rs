use thiserror::Error;

use crate::channel::ChannelFailure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a Lie sphere: (v,v) = {0:e} relative to |v|^2")]
    NotLieSphere(f64),
    #[error("span of zero vectors")]
    EmptySpan,
    #[error("degenerate Gram form")]
    DegenerateGram,
    #[error("normal vector must have unit length (|n| = {0})")]
    NonUnitNormal(f64),
    #[error("identical contact elements")]
    IdenticalContactElements,
    #[error("not in contact: contact elements have trivial intersection")]
    NotInContact,
    #[error("not a contact element: {0}")]
    InvalidContactElement(String),
    #[error("not a discrete Legendre map: {count} edge(s) fail, first at edge {first_edge}")]
    NotLegendre { count: usize, first_edge: usize },
    #[error("vertex-star does not span a contact element at vertex {vertex}: {reason}")]
    VertexStar { vertex: usize, reason: String },
    #[error("degenerate face {face}: {reason}")]
    DegenerateFace { face: usize, reason: String },
    #[error("invalid cell complex: {0}")]
    InvalidComplex(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a channel surface: {0}")]
    NotChannel(ChannelFailure),
    #[error("curvature sphere is a point sphere on line {line}: no admissible projection")]
    PointSphereCurvature { line: usize },
    #[error(
        "generating circle of line {line} disagrees between its ribbons (residual {residual:e})"
    )]
    CircleDisagreement { line: usize, residual: f64 },
    #[error("face-sphere of ribbon {ribbon} is not unique (intersection dimension {dim})")]
    FaceSphere { ribbon: usize, dim: usize },
    #[error("no swapping reflection for ribbon {ribbon}: candidate residuals {residuals:?}")]
    NoSwappingReflection { ribbon: usize, residuals: [f64; 2] },
    #[error("quer-sphere of line {line} is undetermined")]
    QuerSphere { line: usize },
    #[error("coincident points")]
    CoincidentPoints,
    #[error("points are not concircular (residual {0:e})")]
    NotConcircular(f64),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid sphere curve: {0}")]
    InvalidSphereCurve(String),
    #[error("orientation search on edge {edge} found {candidates} admissible correspondences")]
    Orientation { edge: usize, candidates: usize },
    #[error("propagation is not tangent on edge {edge}: relative discriminant {value:e}")]
    Discriminant { edge: usize, value: f64 },
    #[error("curves do not form a Ribaucour pair (first failing quadrilateral {0})")]
    NotRibaucourPair(usize),
    #[error("inconsistent contact element propagation around quadrilateral {quad} (residual {residual:e})")]
    InconsistentPropagation { quad: usize, residual: f64 },
    #[error("no continuation of the face-cyclide family on face {0}")]
    NoContinuation(usize),
    #[error("invalid tolerance override `{0}`")]
    InvalidTolerance(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}
