use super::address::XyAddress;
use super::xy::{node_at, require_xy, xy_next_hop, Direction};
use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::analysis::DistanceMatrix;
use crate::topology::{Family, LinkKind, NodeId, Topology};

/// Extended XY routing for the diametrical mesh.
///
/// Short trips (same row or column, or offset sum at most `d - 1` with `d`
/// the column count) use plain XY. Longer trips look for a diameter channel
/// `owner -> far` whose detour `|curr, owner| + 1 + dist(far, dest)` beats
/// the XY distance, take the cheapest one (nearer owner, then lower ids on
/// ties) by routing XY to its owner and crossing it, and fall back to XY when
/// none helps.
#[derive(Debug, Clone)]
pub struct ExtXyRouter<'a> {
    topology: &'a Topology,
    distances: DistanceMatrix,
    /// Both directions of every diameter channel as `(owner, far end)`.
    channels: Vec<(NodeId, NodeId)>,
}

impl<'a> ExtXyRouter<'a> {
    pub fn new(topology: &'a Topology) -> Result<Self, RoutingError> {
        if !matches!(topology.family(), Family::D2DMesh | Family::Mesh) {
            return Err(RoutingError::UnsupportedTopology { router: "extxy".into(), family: topology.family() });
        }
        let mut channels: Vec<(NodeId, NodeId)> =
            topology.links_of_kind(LinkKind::DiameterChannel).flat_map(|l| [(l.a, l.b), (l.b, l.a)]).collect();
        channels.sort_unstable();
        Ok(Self { topology, distances: DistanceMatrix::new(topology), channels })
    }

    fn threshold(&self) -> u32 {
        self.topology.size().cols - 1
    }

    /// The diameter channel worth heading for, if any, as `(owner, far end)`.
    fn best_channel(&self, curr: XyAddress, dest: NodeId, direct: u32) -> Option<(NodeId, NodeId)> {
        self.channels
            .iter()
            .filter_map(|&(owner, far)| {
                let reach = curr.manhattan(&self.topology.xy_address(owner)?);
                let cost = reach + 1 + self.distances.get(far, dest)?;
                (cost < direct).then_some(((cost, reach, owner, far), (owner, far)))
            })
            .min_by_key(|&(key, _)| key)
            .map(|(_, ch)| ch)
    }

    fn xy_step(&self, curr: XyAddress, toward: XyAddress) -> NodeId {
        node_at(self.topology, xy_next_hop(curr, toward).apply(curr))
    }
}

impl RoutingFunction for ExtXyRouter<'_> {
    fn name(&self) -> &str {
        "extxy"
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        let curr = require_xy(self.topology, current)?;
        let target = require_xy(self.topology, dest.node)?;
        if xy_next_hop(curr, target) == Direction::Deliver {
            return Ok(Hop::Deliver { core: dest.core });
        }
        let (dx, dy) = (curr.x.abs_diff(target.x), curr.y.abs_diff(target.y));
        let case_one = dx == 0 || dy == 0 || dx + dy <= self.threshold();
        if !case_one {
            if let Some((owner, far)) = self.best_channel(curr, dest.node, dx + dy) {
                if owner == current {
                    return Ok(Hop::Forward(far));
                }
                let at = require_xy(self.topology, owner)?;
                return Ok(Hop::Forward(self.xy_step(curr, at)));
            }
        }
        Ok(Hop::Forward(self.xy_step(curr, target)))
    }
}
