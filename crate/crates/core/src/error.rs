use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex out of range: {vertex} is not in 1..={n}")]
    VertexOutOfRange { vertex: u32, n: u32 },
    #[error("edge of wrong size: expected {expected} vertices, got {got}")]
    EdgeSize { expected: u32, got: usize },
    #[error("uniformity r={r} exceeds vertex count n={n}")]
    UniformityTooLarge { r: u32, n: u32 },
    #[error("vertex count {n} not supported (must be in 1..={max})")]
    VertexCount { n: u32, max: u32 },
    #[error("uniformity must be at least 1")]
    ZeroUniformity,
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("arcs {0}->{1} and {1}->{0} both present in an oriented graph")]
    NotOriented(u32, u32),
    #[error("vertex {0} lies in the set it is meant to cover")]
    VertexInSet(u32),
    #[error("set of size {size} is too small; at least {min} vertices required")]
    SetTooSmall { size: usize, min: u32 },
    #[error("repeated vertex {0} in vertex set")]
    RepeatedVertex(u32),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("hypergraphs differ in shape: (n={0}, r={1}) vs (n={2}, r={3})")]
    ShapeMismatch(u32, u32, u32, u32),
    #[error("{given} is below the covering lower bound {bound}")]
    BelowCoveringBound { given: u128, bound: u128 },
    #[error("x={x} is below the monotone regime x >= {min}")]
    BelowRegime { x: f64, min: u32 },
    #[error("tuples of unequal arity ({0} vs {1})")]
    RaggedTuples(usize, usize),
    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("{n} vertices exceeds the exhaustive canonical-form limit {limit}")]
    CanonicalLimit { n: u32, limit: u32 },
    #[error("infeasible covering strategy: {0}")]
    InfeasibleStrategy(String),
    #[error("instance too large for exhaustive search: {0}")]
    SearchSpaceTooLarge(String),
    #[error("covering number D({n},{r}) unavailable: {reason}")]
    CoveringNumberUnavailable { n: u32, r: u32, reason: String },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
