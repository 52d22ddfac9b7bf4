use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {node} out of range (node_count={node_count})")]
    NodeOutOfRange { node: NodeId, node_count: usize },

    #[error("unknown node '{0}'")]
    UnknownNode(String),

    #[error("invalid measure spec: {0}")]
    InvalidSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("graph has {node_count} nodes, dense solve is capped at {memory_gate}")]
    Capacity {
        node_count: usize,
        memory_gate: usize,
    },

    /// A kernel was asked for the transitions of a terminal or stopped state.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dimension mismatch: table is {table}x{table}, graph has {graph} nodes")]
    DimensionMismatch { table: usize, graph: usize },

    #[error("iterate decreased at ({a},{b}) on sweep {iteration} by {drop:e}")]
    NonMonotone {
        iteration: usize,
        a: NodeId,
        b: NodeId,
        drop: f64,
    },

    #[error("only {found} eligible query nodes, {needed} required")]
    InsufficientEligible { needed: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
