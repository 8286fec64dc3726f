//! Graph oracles: shortest paths, distance metrics, bisection checks and
//! channel-dependency deadlock analysis.

mod cdg;
mod graph;
mod metrics;

use serde::Serialize;
use thiserror::Error;

use crate::routing::RoutingError;
use crate::topology::NodeId;

pub use cdg::{build_cdg, is_deadlock_free, ChannelDependencyGraph};
pub use graph::{bfs_shortest_path, Digraph};
pub use metrics::{
    all_pairs_metrics, min_bisection_width, midline_cut, verify_bisection, BisectionCheck, DistanceMatrix,
    PairMetrics,
};

/// A route from its first to its last node, inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathResult {
    pub path: Vec<NodeId>,
    pub distance: u32,
}

impl PathResult {
    pub fn source(&self) -> NodeId {
        self.path[0]
    }

    pub fn sink(&self) -> NodeId {
        *self.path.last().expect("paths are never empty")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("no path from {src} to {dst}")]
    Unreachable { src: NodeId, dst: NodeId },
    #[error("node {0} is out of range")]
    InvalidNode(NodeId),
    #[error("graph is disconnected: {dst} unreachable from {src}")]
    Disconnected { src: NodeId, dst: NodeId },
    #[error("routing failed: {0}")]
    Routing(#[from] RoutingError),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::Unreachable { .. } => "Unreachable",
            AnalysisError::InvalidNode(_) => "InvalidNode",
            AnalysisError::Disconnected { .. } => "Disconnected",
            AnalysisError::Routing(RoutingError::RoutingIncomplete { .. }) => "RoutingIncomplete",
            AnalysisError::Routing(e) => e.code(),
        }
    }
}
