use thiserror::Error;

use crate::embed::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("inconsistent rotation system: {0}")]
    InconsistentRotation(String),
    #[error("walk {0:?} is not a face boundary")]
    OuterNotFace(Vec<Vertex>),
    #[error("{0:?} is not a simple cycle of the graph")]
    NotACycle(Vec<Vertex>),
}

/// Text parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {0} vertices; at least 4 are needed")]
    TooSmall(usize),
    #[error("cycle is not the outer face boundary")]
    OuterNotFace,
    #[error("vertex {0} is not on the outer cycle")]
    NotExternal(Vertex),
    #[error("not a circuit graph: {0}")]
    NotCircuit(String),
    #[error("not a plain chain of blocks: {0}")]
    NotAChain(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoodnessError {
    #[error("vertex {0} is not external")]
    NotExternal(Vertex),
    #[error("invalid chain anchor: {0}")]
    AnchorInvalid(String),
}

/// Failures of the constructive routines. `InternalInconsistency` means a
/// guaranteed object failed validation and always carries a diagnostic.
#[derive(Debug, Clone, Error)]
pub enum ChainsError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("graph is bad with respect to {0} and {1}")]
    BadPair(Vertex, Vertex),
    #[error("input is an odd cycle")]
    OddCycleInput,
    #[error("search backend exhausted without a witness: {0}")]
    ExhaustionFailure(String),
    #[error("internal inconsistency: {}", .0.message)]
    InternalInconsistency(Box<crate::diagnostics::Diagnostic>),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, above the search bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("corpus limit exceeded: {0}")]
    LimitExceeded(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrismError {
    #[error("not a bipartite cactus: {0}")]
    NotBipartiteCactus(String),
}
