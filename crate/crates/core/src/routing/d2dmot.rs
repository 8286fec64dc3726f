use std::collections::HashMap;

use super::address::{tree_distance, MotRole, Prefix};
use super::mot::MotIndex;
use super::{Destination, Hop, RoutingError, RoutingFunction};
use crate::topology::{Family, LinkKind, NodeId, Topology};

/// Routing for the diagonally augmented mesh-of-trees.
///
/// Same-row and same-column pairs stay in the shared tree. Otherwise a leaf
/// takes its diagonal link when the far leaf is closer in tree distance
/// (row distance plus column distance); failing that the packet fixes its
/// row in the column tree, crossing a column-root shortcut when that is
/// cheaper, and then fixes its column in the row tree.
#[derive(Debug, Clone)]
pub struct D2dMotRouter {
    index: MotIndex,
    /// Diagonal neighbors of each leaf, ascending.
    diagonals: HashMap<NodeId, Vec<NodeId>>,
    /// Column tree joined to each column by a root shortcut.
    column_partner: HashMap<u32, u32>,
}

impl D2dMotRouter {
    pub fn new(topology: &Topology) -> Result<Self, RoutingError> {
        if topology.family() != Family::D2DMoT {
            return Err(RoutingError::UnsupportedTopology { router: "d2dmot".into(), family: topology.family() });
        }
        let index = MotIndex::new(topology, "d2dmot")?;
        let mut diagonals: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for l in topology.links_of_kind(LinkKind::DiagonalModule) {
            diagonals.entry(l.a).or_default().push(l.b);
            diagonals.entry(l.b).or_default().push(l.a);
        }
        for list in diagonals.values_mut() {
            list.sort_unstable();
        }
        let mut column_partner = HashMap::new();
        for l in topology.links_of_kind(LinkKind::RootShortcut) {
            if let (MotRole::ColumnTree { col: a, .. }, MotRole::ColumnTree { col: b, .. }) =
                (index.role(l.a)?, index.role(l.b)?)
            {
                column_partner.insert(a, b);
                column_partner.insert(b, a);
            }
        }
        Ok(Self { index, diagonals, column_partner })
    }

    fn leaf_score(row: u32, col: u32, dr: u32, dc: u32) -> u32 {
        tree_distance(row, dr) + tree_distance(col, dc)
    }

    fn at_leaf(&self, id: NodeId, row: u32, col: u32, dr: u32, dc: u32) -> Result<NodeId, RoutingError> {
        let ix = &self.index;
        if row == dr {
            return Ok(ix.row_parent_of_leaf(row, col));
        }
        if col == dc {
            return Ok(ix.column_parent_of_leaf(row, col));
        }
        let here = Self::leaf_score(row, col, dr, dc);
        let mut best: Option<(u32, NodeId)> = None;
        for &far in self.diagonals.get(&id).map(Vec::as_slice).unwrap_or(&[]) {
            let (r, c) = ix.leaf_of(far)?;
            let score = Self::leaf_score(r, c, dr, dc);
            if score < here && best.is_none_or(|b| (score, far) < b) {
                best = Some((score, far));
            }
        }
        Ok(match best {
            Some((_, far)) => far,
            None => ix.column_parent_of_leaf(row, col),
        })
    }

    fn in_column_tree(&self, col: u32, level: u8, pos: u32, dr: u32, dc: u32) -> NodeId {
        let ix = &self.index;
        if col != dc {
            if let Some(&other) = self.column_partner.get(&col) {
                let depth = ix.geo.col_depth;
                let meet = common_prefix(Prefix::new(pos, level), dr, depth);
                let stay = (level - meet) as u32 + (depth - meet) as u32 + tree_distance(col, dc);
                let cross = level as u32 + 1 + depth as u32 + tree_distance(other, dc);
                if cross < stay {
                    return if level == 0 {
                        ix.column_node(other, 0, 0)
                    } else {
                        ix.column_node(col, level - 1, pos >> 1)
                    };
                }
            }
        }
        ix.column_step(col, level, pos, dr)
    }
}

/// Level of the deepest ancestor of `node` (itself included) whose prefix covers `index`.
fn common_prefix(node: Prefix, index: u32, depth: u8) -> u8 {
    let mut p = node;
    while !p.covers(index, depth) {
        p = p.parent().expect("the root covers every index");
    }
    p.len
}

impl RoutingFunction for D2dMotRouter {
    fn name(&self) -> &str {
        "d2dmot"
    }

    fn next_hop(&self, current: NodeId, dest: Destination) -> Result<Hop, RoutingError> {
        let ix = &self.index;
        let (dr, dc) = ix.leaf_of(dest.node)?;
        let next = match ix.role(current)? {
            MotRole::Leaf { row, col } if (row, col) == (dr, dc) => return Ok(Hop::Deliver { core: dest.core }),
            MotRole::Leaf { row, col } => self.at_leaf(current, row, col, dr, dc)?,
            MotRole::ColumnTree { col, level, pos } => self.in_column_tree(col, level, pos, dr, dc),
            MotRole::RowTree { row, level, pos } => ix.row_step(row, level, pos, dc),
        };
        Ok(Hop::Forward(next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::route_trace;
    use crate::topology::{build_topology, BuildConfig, Size};

    fn setup() -> Topology {
        build_topology(Family::D2DMoT, Size::square(4), &BuildConfig::default()).unwrap()
    }

    #[test]
    fn worked_routes() {
        let t = setup();
        let r = D2dMotRouter::new(&t).unwrap();
        let leaf = |row: u32, col: u32| NodeId(row * 4 + col);
        let trace = |a, b| route_trace(&r, &t, a, Destination::router(b)).unwrap();
        assert_eq!(trace(leaf(0, 0), leaf(0, 3)).distance, 4);
        assert_eq!(trace(leaf(0, 0), leaf(1, 1)).path, [leaf(0, 0), leaf(1, 1)]);
        let core2 = Destination { node: leaf(0, 0), core: 1 };
        assert_eq!(r.next_hop(leaf(0, 0), core2).unwrap(), Hop::Deliver { core: 1 });
    }

    #[test]
    fn column_shortcut_is_taken_when_cheaper() {
        let t = setup();
        let r = D2dMotRouter::new(&t).unwrap();
        // (0,1) -> (3,2): up column 1, across to column 2, down: 2 + 1 + 2
        let p = route_trace(&r, &t, NodeId(1), Destination::router(NodeId(14))).unwrap();
        assert_eq!(p.distance, 5);
        assert!(p.path.windows(2).any(|w| t.link(t.link_between(w[0], w[1]).unwrap()).kind == LinkKind::RootShortcut));
    }

    #[test]
    fn common_prefix_levels() {
        assert_eq!(common_prefix(Prefix::new(0, 0), 3, 2), 0);
        assert_eq!(common_prefix(Prefix::new(1, 1), 3, 2), 1);
        assert_eq!(common_prefix(Prefix::new(2, 2), 3, 2), 1);
        assert_eq!(common_prefix(Prefix::new(0, 2), 3, 2), 0);
    }
}
