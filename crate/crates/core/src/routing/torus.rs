use super::address::XyAddress;
use super::xy::{node_at, require_xy};
use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::topology::{Family, NodeId, Topology};

/// How a torus dimension is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WrapPolicy {
    /// Take the shorter way around the ring, positive direction on ties.
    Shortest,
    /// Always move in the positive direction, wrapping from the last index
    /// to 0. Not deadlock free: each ring becomes a dependency cycle.
    Ascending,
}

/// Dimension-order routing on a torus (`x` first, then `y`).
#[derive(Debug, Clone)]
pub struct TorusXyRouter<'a> {
    topology: &'a Topology,
    policy: WrapPolicy,
}

impl<'a> TorusXyRouter<'a> {
    pub fn new(topology: &'a Topology, policy: WrapPolicy) -> Result<Self, RoutingError> {
        if topology.family() != Family::Torus {
            return Err(RoutingError::UnsupportedTopology { router: "torus-xy".into(), family: topology.family() });
        }
        Ok(Self { topology, policy })
    }

    /// One step in a ring of `len` from `at` toward `to`, or `None` if equal.
    fn ring_step(&self, at: u32, to: u32, len: u32) -> Option<u32> {
        if at == to {
            return None;
        }
        let forward = (to + len - at) % len;
        let positive = match self.policy {
            WrapPolicy::Ascending => true,
            WrapPolicy::Shortest => forward <= len - forward,
        };
        Some(if positive { (at + 1) % len } else { (at + len - 1) % len })
    }
}

impl RoutingFunction for TorusXyRouter<'_> {
    fn name(&self) -> &str {
        match self.policy {
            WrapPolicy::Shortest => "torus-xy",
            WrapPolicy::Ascending => "torus-xy-ascending",
        }
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        let curr = require_xy(self.topology, current)?;
        let target = require_xy(self.topology, dest.node)?;
        let size = self.topology.size();
        let next = if let Some(x) = self.ring_step(curr.x, target.x, size.rows) {
            XyAddress::new(x, curr.y)
        } else if let Some(y) = self.ring_step(curr.y, target.y, size.cols) {
            XyAddress::new(curr.x, y)
        } else {
            return Ok(Hop::Deliver { core: dest.core });
        };
        Ok(Hop::Forward(node_at(self.topology, next)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::route_trace;
    use crate::topology::{build_topology, BuildConfig, Size};

    #[test]
    fn shortest_policy_wraps_and_ascending_goes_the_long_way() {
        let t = build_topology(Family::Torus, Size::square(5), &BuildConfig::default()).unwrap();
        let short = TorusXyRouter::new(&t, WrapPolicy::Shortest).unwrap();
        let asc = TorusXyRouter::new(&t, WrapPolicy::Ascending).unwrap();
        let (src, dst) = (NodeId(1), NodeId(0)); // (0,1) -> (0,0)
        assert_eq!(route_trace(&short, &t, src, Destination::router(dst)).unwrap().distance, 1);
        assert_eq!(route_trace(&asc, &t, src, Destination::router(dst)).unwrap().distance, 4);
        // (0,0) -> (0,4) is one hop over the wraparound
        assert_eq!(route_trace(&short, &t, NodeId(0), Destination::router(NodeId(4))).unwrap().path, [NodeId(0), NodeId(4)]);
    }
}
