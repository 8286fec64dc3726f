use std::collections::HashMap;

use super::address::{MotAddress, MotGeometry, MotRole, Prefix};
use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::topology::{NodeId, Topology};

/// Address lookups for a mesh-of-trees topology.
#[derive(Debug, Clone)]
pub(crate) struct MotIndex {
    pub(crate) geo: MotGeometry,
    roles: Vec<MotRole>,
    by_address: HashMap<MotAddress, NodeId>,
}

impl MotIndex {
    pub(crate) fn new(topology: &Topology, router: &str) -> Result<Self, RoutingError> {
        let unsupported = || RoutingError::UnsupportedTopology { router: router.into(), family: topology.family() };
        let geo = topology.mot_geometry().ok_or_else(unsupported)?;
        let mut roles = Vec::with_capacity(topology.node_count());
        let mut by_address = HashMap::with_capacity(topology.node_count());
        for id in topology.node_ids() {
            let addr = topology.mot_address(id).ok_or(RoutingError::AddressMismatch(id))?;
            if !addr.is_consistent(&geo) {
                return Err(RoutingError::AddressMismatch(id));
            }
            roles.push(addr.role(&geo));
            by_address.insert(addr.router(), id);
        }
        Ok(Self { geo, roles, by_address })
    }

    pub(crate) fn role(&self, id: NodeId) -> Result<MotRole, RoutingError> {
        self.roles.get(id.index()).copied().ok_or(RoutingError::AddressMismatch(id))
    }

    /// Row and column of a leaf destination.
    pub(crate) fn leaf_of(&self, id: NodeId) -> Result<(u32, u32), RoutingError> {
        match self.role(id)? {
            MotRole::Leaf { row, col } => Ok((row, col)),
            _ => Err(RoutingError::AddressMismatch(id)),
        }
    }

    fn lookup(&self, addr: MotAddress) -> NodeId {
        self.by_address[&addr]
    }

    pub(crate) fn leaf(&self, row: u32, col: u32) -> NodeId {
        self.lookup(MotAddress::leaf(row, col, &self.geo))
    }

    pub(crate) fn column_node(&self, col: u32, level: u8, pos: u32) -> NodeId {
        self.lookup(MotAddress::column_node(col, level, pos, &self.geo))
    }

    pub(crate) fn row_node(&self, row: u32, level: u8, pos: u32) -> NodeId {
        self.lookup(MotAddress::row_node(row, level, pos, &self.geo))
    }

    /// Parent of a leaf in its column tree.
    pub(crate) fn column_parent_of_leaf(&self, row: u32, col: u32) -> NodeId {
        self.column_node(col, self.geo.col_depth - 1, row >> 1)
    }

    pub(crate) fn row_parent_of_leaf(&self, row: u32, col: u32) -> NodeId {
        self.row_node(row, self.geo.row_depth - 1, col >> 1)
    }

    /// One step inside column tree `col` from internal node `(level, pos)` toward row `target`.
    pub(crate) fn column_step(&self, col: u32, level: u8, pos: u32, target: u32) -> NodeId {
        let depth = self.geo.col_depth;
        let here = Prefix::new(pos, level);
        if !here.covers(target, depth) {
            return self.column_node(col, level - 1, pos >> 1);
        }
        let child = here.child_toward(target, depth);
        if child.len == depth {
            self.leaf(child.value, col)
        } else {
            self.column_node(col, child.len, child.value)
        }
    }

    /// One step inside row tree `row` from internal node `(level, pos)` toward column `target`.
    pub(crate) fn row_step(&self, row: u32, level: u8, pos: u32, target: u32) -> NodeId {
        let depth = self.geo.row_depth;
        let here = Prefix::new(pos, level);
        if !here.covers(target, depth) {
            return self.row_node(row, level - 1, pos >> 1);
        }
        let child = here.child_toward(target, depth);
        if child.len == depth {
            self.leaf(row, child.value)
        } else {
            self.row_node(row, child.len, child.value)
        }
    }
}

/// Mesh-of-trees routing: fix the row in the column tree, then the column in
/// the row tree, then deliver to the addressed core.
#[derive(Debug, Clone)]
pub struct MotRouter {
    index: MotIndex,
}

impl MotRouter {
    pub fn new(topology: &Topology) -> Result<Self, RoutingError> {
        Ok(Self { index: MotIndex::new(topology, "mot")? })
    }
}

impl RoutingFunction for MotRouter {
    fn name(&self) -> &str {
        "mot"
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        let ix = &self.index;
        let (dr, dc) = ix.leaf_of(dest.node)?;
        let next = match ix.role(current)? {
            MotRole::Leaf { row, col } => {
                if row != dr {
                    ix.column_parent_of_leaf(row, col)
                } else if col != dc {
                    ix.row_parent_of_leaf(row, col)
                } else {
                    return Ok(Hop::Deliver { core: dest.core });
                }
            }
            MotRole::ColumnTree { col, level, pos } => ix.column_step(col, level, pos, dr),
            // a row tree only ever moves toward the destination column; a
            // packet in the wrong row finishes there through the column tree
            MotRole::RowTree { row, level, pos } => ix.row_step(row, level, pos, dc),
        };
        Ok(Hop::Forward(next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::route_trace;
    use crate::topology::{build_topology, BuildConfig, Family, Size};

    #[test]
    fn worked_routes() {
        let t = build_topology(Family::MoT, Size::square(4), &BuildConfig::default()).unwrap();
        let r = MotRouter::new(&t).unwrap();
        let leaf = |row: u32, col: u32| NodeId(row * 4 + col);
        let len = |a, b| route_trace(&r, &t, a, Destination::router(b)).unwrap().distance;
        assert_eq!(len(leaf(0, 0), leaf(3, 0)), 4);
        assert_eq!(len(leaf(0, 0), leaf(3, 3)), 8);
        assert_eq!(len(leaf(0, 0), leaf(0, 1)), 2);
        assert_eq!(r.next_hop(leaf(0, 0), Destination::router(leaf(0, 0))).unwrap(), Hop::Deliver { core: 0 });
    }

    #[test]
    fn rejects_mesh_and_internal_destinations() {
        let mesh = build_topology(Family::Mesh, Size::square(4), &BuildConfig::default()).unwrap();
        assert_eq!(MotRouter::new(&mesh).unwrap_err().code(), "UnsupportedTopology");
        let t = build_topology(Family::MoT, Size::square(4), &BuildConfig::default()).unwrap();
        let r = MotRouter::new(&t).unwrap();
        assert_eq!(r.next_hop(NodeId(0), Destination::router(NodeId(20))).unwrap_err().code(), "AddressMismatch");
    }
}
