use crate::tree::VertexId;

/// Errors produced by construction, parsing, routing and verification.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: VertexId, v: VertexId },

    #[error("edge ({u}, {v}) has nonpositive weight {w}")]
    NonpositiveWeight { u: VertexId, v: VertexId, w: f64 },

    #[error("edge ({u}, {v}) closes a cycle")]
    CycleDetected { u: VertexId, v: VertexId },

    #[error("vertex {v} is not reachable from the root")]
    Disconnected { v: VertexId },

    #[error("vertex id {v} out of range for {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },

    #[error("vertex {v} is not in the given subtree")]
    NotInSubtree { v: VertexId },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no viable neighbour at vertex {at} while routing toward rank {dest_rank}")]
    NoViableNeighbour { at: VertexId, dest_rank: u32 },

    #[error("hop budget {budget} exceeded routing {src} -> {dest} ({visited} vertices visited)")]
    HopBudgetExceeded {
        src: VertexId,
        dest: VertexId,
        budget: usize,
        visited: usize,
    },

    #[error("no path between {u} and {v} in the spanner")]
    Unreachable { u: VertexId, v: VertexId },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated: {name} (seed {seed})")]
    InvariantViolation { name: String, seed: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
