use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("grouping maps {got} vertices but the graph has {expected}")]
    GroupingNotTotal { got: usize, expected: usize },
    #[error("group ids are not dense in [0, {groups})")]
    SparseGroupIds { groups: usize },
    #[error("cut side must be nonempty and proper")]
    ImproperSide,
    #[error("source and sink coincide at vertex {0}")]
    SameEndpoints(usize),
    #[error("vertex sets must be nonempty and disjoint")]
    BadVertexSets,
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("connectivity parameter must be at least 1")]
    InvalidConnectivity,
    #[error("invalid phi {0}: must lie in (0, 1]")]
    InvalidPhi(f64),
    #[error("demands must be finite and nonnegative")]
    InvalidDemand,
    #[error("vertex {vertex} has degree {degree} < d = {d}")]
    DegreeBelowThreshold {
        vertex: usize,
        degree: usize,
        d: usize,
    },
    #[error("set of {size} vertices exceeds the exhaustive limit of {cap}")]
    TooLargeForExhaustive { size: usize, cap: usize },
    #[error("source {0} is not among the terminals")]
    SourceNotInSet(usize),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("invalid sampler configuration: {0}")]
    InvalidSampler(String),
    #[error("malformed partial tree: {0}")]
    MalformedTree(String),
    #[error("missing combine anchor: {0}")]
    MissingAnchor(String),
    #[error("refinement integrity violated: {0}")]
    RefinementIntegrity(String),
    #[error("auxiliary graph budget violated: {0}")]
    AuxiliaryBudget(String),
    #[error("u and v must differ (got {0})")]
    SameQueryVertex(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}
