use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::graph::{Digraph, UNREACHABLE};
use super::AnalysisError;
use crate::topology::{LinkId, NodeId, Topology};

/// All-pairs hop distances of a topology, row-major by source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(topology: &Topology) -> Self {
        Self::from_graph(&Digraph::from_topology(topology))
    }

    pub fn from_graph(graph: &Digraph) -> Self {
        let n = graph.node_count();
        let rows: Vec<Vec<u32>> = (0..n as u32).into_par_iter().map(|s| graph.bfs_distances(s)).collect();
        Self { n, dist: rows.concat() }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `None` if `b` is unreachable from `a`.
    pub fn get(&self, a: NodeId, b: NodeId) -> Option<u32> {
        let d = self.dist[a.index() * self.n + b.index()];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn row(&self, a: NodeId) -> &[u32] {
        &self.dist[a.index() * self.n..(a.index() + 1) * self.n]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairMetrics {
    pub diameter: u32,
    /// Sum of distances over ordered distinct pairs.
    pub total_hops: u64,
    pub pairs: u64,
    pub eccentricity: BTreeMap<NodeId, u32>,
}

impl PairMetrics {
    pub fn avg_hops(&self) -> f64 {
        if self.pairs == 0 {
            0.0
        } else {
            self.total_hops as f64 / self.pairs as f64
        }
    }
}

/// Diameter, mean distance over ordered distinct router pairs, and eccentricities.
pub fn all_pairs_metrics(topology: &Topology) -> Result<PairMetrics, AnalysisError> {
    let dm = DistanceMatrix::new(topology);
    let n = dm.node_count();
    let mut eccentricity = BTreeMap::new();
    let mut total_hops = 0u64;
    for s in 0..n as u32 {
        let row = dm.row(NodeId(s));
        if let Some(t) = row.iter().position(|&d| d == UNREACHABLE) {
            return Err(AnalysisError::Disconnected { src: NodeId(s), dst: NodeId(t as u32) });
        }
        eccentricity.insert(NodeId(s), row.iter().copied().max().unwrap_or(0));
        total_hops += row.iter().map(|&d| d as u64).sum::<u64>();
    }
    let diameter = eccentricity.values().copied().max().unwrap_or(0);
    let pairs = (n as u64) * (n as u64).saturating_sub(1);
    Ok(PairMetrics { diameter, total_hops, pairs, eccentricity })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisectionCheck {
    pub is_bisection: bool,
    /// Sizes of the two largest components, larger first.
    pub halves: (usize, usize),
    pub components: usize,
}

/// Whether removing `cut` leaves exactly two components whose sizes differ by at most one.
pub fn verify_bisection(topology: &Topology, cut: &[LinkId]) -> BisectionCheck {
    let removed: HashSet<LinkId> = cut.iter().copied().collect();
    let n = topology.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &(v, link) in topology.neighbors(NodeId(u as u32)) {
                if !removed.contains(&link) && comp[v.index()] == usize::MAX {
                    comp[v.index()] = id;
                    stack.push(v.index());
                }
            }
        }
        sizes.push(size);
    }
    let mut sorted = sizes.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let halves = (sorted[0], sorted.get(1).copied().unwrap_or(0));
    BisectionCheck { is_bisection: sizes.len() == 2 && halves.0 - halves.1 <= 1, halves, components: sizes.len() }
}

/// Links crossing the vertical midline (`y < N/2` versus `y >= N/2`) of a
/// grid-addressed topology, wraparound links included. `None` without grid addresses.
pub fn midline_cut(topology: &Topology) -> Option<Vec<LinkId>> {
    let half = topology.size().cols / 2;
    let mut cut = Vec::new();
    for (i, l) in topology.links().iter().enumerate() {
        let (a, b) = (topology.xy_address(l.a)?, topology.xy_address(l.b)?);
        if (a.y < half) != (b.y < half) {
            cut.push(LinkId(i as u32));
        }
    }
    Some(cut)
}

/// Exact minimum bisection width by exhaustive search. `None` above 12 routers.
pub fn min_bisection_width(topology: &Topology) -> Option<u32> {
    let n = topology.node_count();
    if !(2..=12).contains(&n) {
        return None;
    }
    let sizes = [n / 2, n - n / 2];
    let mut best = u32::MAX;
    // node 0 is kept in the masked side; each partition is then visited at most twice
    for mask in (1u32..(1 << n)).step_by(2) {
        if !sizes.contains(&(mask.count_ones() as usize)) {
            continue;
        }
        let crossing = topology.links().iter().filter(|l| (mask >> l.a.0 & 1) != (mask >> l.b.0 & 1)).count();
        best = best.min(crossing as u32);
    }
    Some(best)
}
