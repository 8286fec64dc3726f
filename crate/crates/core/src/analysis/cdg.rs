use std::collections::BTreeSet;

use petgraph::algo::{is_cyclic_directed, tarjan_scc};
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use super::AnalysisError;
use crate::routing::{route_trace, Destination, RoutingFunction};
use crate::topology::{ChannelId, Topology};

/// Channel dependencies of a routing function: `(c1, c2)` means a packet can
/// hold `c1` while requesting `c2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChannelDependencyGraph {
    channel_count: usize,
    edges: BTreeSet<(ChannelId, ChannelId)>,
}

impl ChannelDependencyGraph {
    pub fn from_edges(channel_count: usize, edges: impl IntoIterator<Item = (ChannelId, ChannelId)>) -> Self {
        Self { channel_count, edges: edges.into_iter().collect() }
    }

    pub fn channel_count(&self) -> usize {
        self.channel_count
    }

    pub fn edges(&self) -> &BTreeSet<(ChannelId, ChannelId)> {
        &self.edges
    }

    fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.channel_count, self.edges.len());
        for _ in 0..self.channel_count {
            g.add_node(());
        }
        g.extend_with_edges(self.edges.iter().map(|&(a, b)| (a.0, b.0)));
        g
    }

    /// Channels of one dependency cycle, if any (a strongly connected set).
    pub fn cycle_witness(&self) -> Option<Vec<ChannelId>> {
        tarjan_scc(&self.graph())
            .into_iter()
            .find(|scc| scc.len() > 1)
            .map(|scc| {
                let mut v: Vec<ChannelId> = scc.into_iter().map(|n| ChannelId(n.index() as u32)).collect();
                v.sort_unstable();
                v
            })
    }
}

/// Dependencies along every routed path between distinct endpoint routers.
pub fn build_cdg<R: RoutingFunction + ?Sized>(
    topology: &Topology,
    routing: &R,
) -> Result<ChannelDependencyGraph, AnalysisError> {
    let endpoints = topology.endpoints();
    let per_source: Vec<Result<BTreeSet<(ChannelId, ChannelId)>, AnalysisError>> = endpoints
        .par_iter()
        .map(|&src| {
            let mut edges = BTreeSet::new();
            for &dst in &endpoints {
                if dst == src {
                    continue;
                }
                let trace = route_trace(routing, topology, src, Destination::router(dst))?;
                let channels: Vec<ChannelId> = trace
                    .path
                    .windows(2)
                    .map(|w| topology.channel(w[0], w[1]).expect("traced hops are links"))
                    .collect();
                edges.extend(channels.windows(2).map(|w| (w[0], w[1])));
            }
            Ok(edges)
        })
        .collect();
    let mut edges = BTreeSet::new();
    for part in per_source {
        edges.extend(part?);
    }
    Ok(ChannelDependencyGraph { channel_count: topology.channel_count(), edges })
}

/// True iff the dependency graph has no directed cycle.
pub fn is_deadlock_free(cdg: &ChannelDependencyGraph) -> bool {
    !is_cyclic_directed(&cdg.graph())
}
