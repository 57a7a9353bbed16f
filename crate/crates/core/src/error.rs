use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("empty set has no Hausdorff distance")]
    EmptySet,

    #[error("exact mode over cap ({size} > {cap}); use lower_bound mode")]
    OverCap { size: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed covering: {0}")]
    MalformedCovering(String),

    #[error("check requires ultrametric assertion")]
    NotUltrametric,

    #[error("counting measure not supported here (m = 0)")]
    ZeroDimension,

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("0-chains have no boundary")]
    ZeroChainBoundary,

    #[error("chains live on different complexes")]
    ComplexMismatch,

    #[error("image simplex {0:?} absent from target complex")]
    MissingImage(Vec<usize>),

    #[error("non-manifold facet {facet} with {cofaces} cofaces")]
    NonManifold { facet: usize, cofaces: usize },

    #[error("incoherent orientation across facet {facet}")]
    Incoherent { facet: usize },

    #[error("target not null-homologous in ambient")]
    NotNullHomologous,

    #[error("target is not a cycle")]
    NotACycle,

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("simplex cap exceeded: {count} simplices (cap {cap})")]
    TooManySimplices { count: usize, cap: usize },

    #[error("cycle not supported on the Rips complex at the smallest grid value")]
    NotOnRips,

    #[error("parameter violation: {0}")]
    Parameter(String),

    #[error("grid outside admissible window: {0}")]
    OutsideWindow(String),

    #[error("trend needs >= 3 points")]
    TrendTooShort,

    #[error("parse error in field `{field}`: {msg}")]
    Parse { field: String, msg: String },
}
