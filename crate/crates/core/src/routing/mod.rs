//! Deterministic next-hop routing.
//!
//! Every router implements [`RoutingFunction`]: given the router a packet is
//! at and the packet's destination, return the neighbor to forward to or
//! deliver locally. [`route_trace`] follows a routing function hop by hop and
//! enforces the livelock bound (at most `node_count` hops).

pub mod address;
mod d2dmot;
mod ext_xy;
mod mot;
mod table;
mod torus;
mod validate;
mod xy;

use thiserror::Error;

use crate::analysis::PathResult;
use crate::topology::{Family, NodeId, Topology};

pub use d2dmot::D2dMotRouter;
pub use ext_xy::ExtXyRouter;
pub use mot::MotRouter;
pub use table::TableRouter;
pub use torus::{TorusXyRouter, WrapPolicy};
pub use validate::{validate_routing, RouteFailure, StretchReport, StretchRow, ValidationSummary};
pub use xy::{xy_next_hop, Direction, XyRouter};

/// Where a packet is headed: a router plus the index of the core attached
/// to it (0 for the first core).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Destination {
    pub node: NodeId,
    pub core: u8,
}

impl Destination {
    pub fn router(node: NodeId) -> Self {
        Self { node, core: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hop {
    Forward(NodeId),
    Deliver { core: u8 },
}

/// Network state seen by a routing decision. All routers here are oblivious
/// and ignore it; it exists so adaptive routers can share the interface.
#[derive(Debug, Clone, Copy, Default)]
pub struct NetworkState;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    #[error("node {0} has no address usable by this router")]
    AddressMismatch(NodeId),
    #[error("no next hop from {at} toward {dest}")]
    RoutingIncomplete { at: NodeId, dest: NodeId },
    #[error("route from {src} to {dest} exceeded {bound} hops")]
    LivelockDetected { src: NodeId, dest: NodeId, bound: usize },
    #[error("router chose {to} from {from}, which is not a neighbor")]
    InvalidHop { from: NodeId, to: NodeId },
    #[error("{router} routing does not apply to {family} topologies")]
    UnsupportedTopology { router: String, family: Family },
    #[error("node {0} is unreachable")]
    Disconnected(NodeId),
}

impl RoutingError {
    pub fn code(&self) -> &'static str {
        match self {
            RoutingError::AddressMismatch(_) => "AddressMismatch",
            RoutingError::RoutingIncomplete { .. } => "RoutingIncomplete",
            RoutingError::LivelockDetected { .. } => "LivelockDetected",
            RoutingError::InvalidHop { .. } => "InvalidHop",
            RoutingError::UnsupportedTopology { .. } => "UnsupportedTopology",
            RoutingError::Disconnected(_) => "Disconnected",
        }
    }
}

pub trait RoutingFunction: Send + Sync {
    fn name(&self) -> &str;

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError>;

    /// The full decision `RD(r, s, d, state)`; oblivious routers use only `r` and `d`.
    fn decide(&self, current: NodeId, _source: NodeId, dest: Destination, _state: &NetworkState) -> Result<Hop, RoutingError> {
        self.next_hop(current, dest)
    }
}

impl<R: RoutingFunction + ?Sized> RoutingFunction for &R {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        (**self).next_hop(current, dest)
    }
}

impl<R: RoutingFunction + ?Sized> RoutingFunction for Box<R> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        (**self).next_hop(current, dest)
    }
}

/// Router names accepted by [`router_for`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoutingKind {
    Xy,
    ExtXy,
    Mot,
    D2dMot,
    Table,
}

impl RoutingKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "xy" => Some(RoutingKind::Xy),
            "extxy" => Some(RoutingKind::ExtXy),
            "mot" => Some(RoutingKind::Mot),
            "d2dmot" => Some(RoutingKind::D2dMot),
            "table" => Some(RoutingKind::Table),
            _ => None,
        }
    }

    /// The family's own routing algorithm.
    pub fn native(family: Family) -> Self {
        match family {
            Family::Mesh | Family::Torus => RoutingKind::Xy,
            Family::D2DMesh => RoutingKind::ExtXy,
            Family::MoT => RoutingKind::Mot,
            Family::D2DMoT => RoutingKind::D2dMot,
            Family::BinaryTree | Family::Custom => RoutingKind::Table,
        }
    }
}

/// Builds the requested router for `topology`. XY on a torus means the
/// shortest-direction torus variant.
pub fn router_for<'a>(kind: RoutingKind, topology: &'a Topology) -> Result<Box<dyn RoutingFunction + 'a>, RoutingError> {
    Ok(match (kind, topology.family()) {
        (RoutingKind::Xy, Family::Torus) => Box::new(TorusXyRouter::new(topology, WrapPolicy::Shortest)?),
        (RoutingKind::Xy, _) => Box::new(XyRouter::new(topology)?),
        (RoutingKind::ExtXy, _) => Box::new(ExtXyRouter::new(topology)?),
        (RoutingKind::Mot, _) => Box::new(MotRouter::new(topology)?),
        (RoutingKind::D2dMot, _) => Box::new(D2dMotRouter::new(topology)?),
        (RoutingKind::Table, _) => Box::new(TableRouter::new(topology)?),
    })
}

/// Follows `routing` from `src` until it delivers at `dest`.
///
/// Fails with `LivelockDetected` once the path would exceed `node_count`
/// hops, and with `InvalidHop` if the router names a non-neighbor.
pub fn route_trace<R: RoutingFunction + ?Sized>(
    routing: &R,
    topology: &Topology,
    src: NodeId,
    dest: Destination,
) -> Result<PathResult, RoutingError> {
    let bound = topology.node_count();
    let mut path = vec![src];
    let mut current = src;
    loop {
        match routing.next_hop(current, dest)? {
            Hop::Deliver { .. } => {
                if current != dest.node {
                    return Err(RoutingError::RoutingIncomplete { at: current, dest: dest.node });
                }
                let distance = path.len() as u32 - 1;
                return Ok(PathResult { path, distance });
            }
            Hop::Forward(next) => {
                if !topology.are_adjacent(current, next) {
                    return Err(RoutingError::InvalidHop { from: current, to: next });
                }
                if path.len() > bound {
                    return Err(RoutingError::LivelockDetected { src, dest: dest.node, bound });
                }
                path.push(next);
                current = next;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_topology, BuildConfig, Size};

    /// Bounces between node 0 and node 1 forever.
    struct PingPong;

    impl RoutingFunction for PingPong {
        fn name(&self) -> &str {
            "ping-pong"
        }

        fn next_hop(&self, current: NodeId, _dest: Destination) -> Result<Hop, RoutingError> {
            Ok(Hop::Forward(NodeId(1 - current.0)))
        }
    }

    struct Teleport;

    impl RoutingFunction for Teleport {
        fn name(&self) -> &str {
            "teleport"
        }

        fn next_hop(&self, _current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
            Ok(Hop::Forward(dest.node))
        }
    }

    #[test]
    fn cyclic_router_is_caught() {
        let t = build_topology(crate::topology::Family::Mesh, Size::square(2), &BuildConfig::default()).unwrap();
        let err = route_trace(&PingPong, &t, NodeId(0), Destination::router(NodeId(3))).unwrap_err();
        assert_eq!(err, RoutingError::LivelockDetected { src: NodeId(0), dest: NodeId(3), bound: 4 });
    }

    #[test]
    fn non_neighbor_hop_is_rejected() {
        let t = build_topology(crate::topology::Family::Mesh, Size::square(2), &BuildConfig::default()).unwrap();
        let err = route_trace(&Teleport, &t, NodeId(0), Destination::router(NodeId(3))).unwrap_err();
        assert_eq!(err.code(), "InvalidHop");
    }

    #[test]
    fn decide_ignores_state() {
        let t = build_topology(crate::topology::Family::Mesh, Size::square(3), &BuildConfig::default()).unwrap();
        let r = XyRouter::new(&t).unwrap();
        let d = Destination::router(NodeId(8));
        assert_eq!(r.decide(NodeId(0), NodeId(0), d, &NetworkState), r.next_hop(NodeId(0), d));
    }
}
