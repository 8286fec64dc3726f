use rayon::prelude::*;

use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::analysis::Digraph;
use crate::topology::{NodeId, Topology};

/// Shortest-path lookup-table router: for every (router, destination) the
/// lowest-id neighbor one hop closer to the destination.
#[derive(Debug, Clone)]
pub struct TableRouter {
    n: usize,
    /// `next[dest * n + current]`; equals `current` on the diagonal.
    next: Vec<u32>,
}

impl TableRouter {
    pub fn new(topology: &Topology) -> Result<Self, RoutingError> {
        let graph = Digraph::from_topology(topology);
        let n = graph.node_count();
        let columns: Vec<Result<Vec<u32>, RoutingError>> = (0..n as u32)
            .into_par_iter()
            .map(|dest| {
                let dist = graph.bfs_distances(dest);
                (0..n as u32)
                    .map(|u| {
                        let d = dist[u as usize];
                        if d == u32::MAX {
                            return Err(RoutingError::Disconnected(NodeId(u)));
                        }
                        if d == 0 {
                            return Ok(u);
                        }
                        Ok(*graph
                            .successors(u)
                            .iter()
                            .find(|&&v| dist[v as usize] == d - 1)
                            .expect("some neighbor is one hop closer"))
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::with_capacity(n * n);
        for col in columns {
            next.extend(col?);
        }
        Ok(Self { n, next })
    }

    /// Number of (router, destination) entries.
    pub fn entries(&self) -> usize {
        self.next.len()
    }
}

impl RoutingFunction for TableRouter {
    fn name(&self) -> &str {
        "table"
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        for v in [current, dest.node] {
            if v.index() >= self.n {
                return Err(RoutingError::AddressMismatch(v));
            }
        }
        if current == dest.node {
            return Ok(Hop::Deliver { core: dest.core });
        }
        Ok(Hop::Forward(NodeId(self.next[dest.node.index() * self.n + current.index()])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::route_trace;
    use crate::topology::{build_topology, BuildConfig, Family, Size};

    #[test]
    fn lowest_id_tie_break() {
        let t = build_topology(Family::Mesh, Size::square(3), &BuildConfig::default()).unwrap();
        let r = TableRouter::new(&t).unwrap();
        // from (0,0) to (1,1) both (0,1)=1 and (1,0)=3 are closer
        assert_eq!(r.next_hop(NodeId(0), Destination::router(NodeId(4))).unwrap(), Hop::Forward(NodeId(1)));
        assert_eq!(route_trace(&r, &t, NodeId(0), Destination::router(NodeId(8))).unwrap().distance, 4);
        assert_eq!(r.entries(), 81);
    }
}
