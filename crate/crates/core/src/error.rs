use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {u}-{v} has a non-positive capacity")]
    NonPositiveCapacity { u: usize, v: usize },
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(usize),
    #[error("vertex {0} is not a terminal")]
    NotTerminal(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("a shore must be a nonempty proper subset of the vertices")]
    ImproperShore,
    #[error("vertex sets overlap")]
    Overlap,
    #[error("source and sink coincide")]
    SameEndpoints,
    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("tie between maximum-weight tree edges at terminal {0}")]
    Tie(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("invalid 3-separated set: {0}")]
    SeparatedSet(String),
    #[error("invalid multiflow instance: {0}")]
    Multiflow(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Search or enumeration gave up because of a size bound.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
