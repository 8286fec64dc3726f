use std::collections::VecDeque;

use super::{AnalysisError, PathResult};
use crate::topology::{NodeId, Topology};

pub(crate) const UNREACHABLE: u32 = u32::MAX;

/// A directed graph over nodes `0..n` with sorted successor and predecessor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
}

impl Digraph {
    /// Builds from directed edges; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (a, b) in edges {
            succ[a as usize].push(b);
            pred[b as usize].push(a);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Self { succ, pred }
    }

    /// Both directions of every link.
    pub fn from_topology(topology: &Topology) -> Self {
        let edges = topology.links().iter().flat_map(|l| [(l.a.0, l.b.0), (l.b.0, l.a.0)]);
        Self::from_edges(topology.node_count(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, v: u32) -> &[u32] {
        &self.succ[v as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.succ[a as usize].binary_search(&b).is_ok()
    }

    /// Hop distances from `src`; `u32::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.succ.len()];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize] + 1;
            for &v in &self.succ[u as usize] {
                if dist[v as usize] == UNREACHABLE {
                    dist[v as usize] = d;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub(crate) fn predecessors(&self, v: u32) -> &[u32] {
        &self.pred[v as usize]
    }
}

/// A minimum-hop path from `src` to `dst`.
///
/// Among equal-length paths the one whose every node has the highest-id
/// predecessor is returned, walking back from `dst`. This is the path a
/// textbook adjacency-matrix Dijkstra with non-strict relaxation reports.
pub fn bfs_shortest_path(graph: &Digraph, src: NodeId, dst: NodeId) -> Result<PathResult, AnalysisError> {
    let n = graph.node_count();
    for v in [src, dst] {
        if v.index() >= n {
            return Err(AnalysisError::InvalidNode(v));
        }
    }
    let dist = graph.bfs_distances(src.0);
    let total = dist[dst.index()];
    if total == UNREACHABLE {
        return Err(AnalysisError::Unreachable { src, dst });
    }
    let mut path = vec![dst];
    let mut v = dst.0;
    while v != src.0 {
        let want = dist[v as usize] - 1;
        v = *graph
            .predecessors(v)
            .iter()
            .rev()
            .find(|&&u| dist[u as usize] == want)
            .expect("a reached node has a predecessor one step closer");
        path.push(NodeId(v));
    }
    path.reverse();
    Ok(PathResult { path, distance: total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_unreachable() {
        let g = Digraph::from_edges(3, [(0, 1)]);
        let p = bfs_shortest_path(&g, NodeId(2), NodeId(2)).unwrap();
        assert_eq!((p.path, p.distance), (vec![NodeId(2)], 0));
        assert_eq!(
            bfs_shortest_path(&g, NodeId(1), NodeId(0)).unwrap_err(),
            AnalysisError::Unreachable { src: NodeId(1), dst: NodeId(0) }
        );
        assert_eq!(bfs_shortest_path(&g, NodeId(0), NodeId(5)).unwrap_err(), AnalysisError::InvalidNode(NodeId(5)));
    }

    #[test]
    fn ties_prefer_the_higher_predecessor() {
        // 0 -> {1, 2} -> 3
        let g = Digraph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        let p = bfs_shortest_path(&g, NodeId(0), NodeId(3)).unwrap();
        assert_eq!(p.path, [NodeId(0), NodeId(2), NodeId(3)]);
    }

    #[test]
    fn direction_matters() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(bfs_shortest_path(&g, NodeId(0), NodeId(2)).unwrap().distance, 2);
        assert_eq!(bfs_shortest_path(&g, NodeId(2), NodeId(0)).unwrap().distance, 1);
    }
}
