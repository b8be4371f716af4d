use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("labeling has {got} entries, graph has {expected} nodes")]
    LabelingMismatch { expected: usize, got: usize },

    #[error("node {node} out of range for a graph with {num_nodes} nodes")]
    NodeOutOfRange { node: usize, num_nodes: usize },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("instance too large for exhaustive search: {got} > {limit}")]
    SizeGuard { limit: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
