use std::cmp::Ordering;

use super::address::XyAddress;
use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::topology::{Family, NodeId, Topology};

/// Grid direction. `x` grows southward, `y` grows eastward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    North,
    South,
    East,
    West,
    Deliver,
}

impl Direction {
    pub fn apply(self, at: XyAddress) -> XyAddress {
        match self {
            Direction::North => XyAddress::new(at.x - 1, at.y),
            Direction::South => XyAddress::new(at.x + 1, at.y),
            Direction::East => XyAddress::new(at.x, at.y + 1),
            Direction::West => XyAddress::new(at.x, at.y - 1),
            Direction::Deliver => at,
        }
    }
}

/// Dimension-order step: correct `x` first, then `y`.
pub fn xy_next_hop(curr: XyAddress, dest: XyAddress) -> Direction {
    match (dest.x.cmp(&curr.x), dest.y.cmp(&curr.y)) {
        (Ordering::Greater, _) => Direction::South,
        (Ordering::Less, _) => Direction::North,
        (Ordering::Equal, Ordering::Greater) => Direction::East,
        (Ordering::Equal, Ordering::Less) => Direction::West,
        (Ordering::Equal, Ordering::Equal) => Direction::Deliver,
    }
}

pub(crate) fn node_at(topology: &Topology, a: XyAddress) -> NodeId {
    NodeId(a.x * topology.size().cols + a.y)
}

pub(crate) fn require_xy(topology: &Topology, id: NodeId) -> Result<XyAddress, RoutingError> {
    topology.xy_address(id).ok_or(RoutingError::AddressMismatch(id))
}

/// XY routing over the grid links of a mesh (extra links are ignored).
#[derive(Debug, Clone)]
pub struct XyRouter<'a> {
    topology: &'a Topology,
}

impl<'a> XyRouter<'a> {
    pub fn new(topology: &'a Topology) -> Result<Self, RoutingError> {
        match topology.family() {
            Family::Mesh | Family::D2DMesh => Ok(Self { topology }),
            family => Err(RoutingError::UnsupportedTopology { router: "xy".into(), family }),
        }
    }
}

impl RoutingFunction for XyRouter<'_> {
    fn name(&self) -> &str {
        "xy"
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        let curr = require_xy(self.topology, current)?;
        let target = require_xy(self.topology, dest.node)?;
        Ok(match xy_next_hop(curr, target) {
            Direction::Deliver => Hop::Deliver { core: dest.core },
            dir => Hop::Forward(node_at(self.topology, dir.apply(curr))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_directions() {
        assert_eq!(xy_next_hop(XyAddress::new(0, 0), XyAddress::new(0, 3)), Direction::East);
        assert_eq!(xy_next_hop(XyAddress::new(2, 1), XyAddress::new(0, 1)), Direction::North);
        assert_eq!(xy_next_hop(XyAddress::new(1, 1), XyAddress::new(1, 1)), Direction::Deliver);
        // x before y
        assert_eq!(xy_next_hop(XyAddress::new(0, 0), XyAddress::new(2, 2)), Direction::South);
        assert_eq!(xy_next_hop(XyAddress::new(2, 3), XyAddress::new(2, 0)), Direction::West);
    }
}
