use std::collections::{BTreeMap, HashSet};

use super::{
    Family, Link, LinkKind, Node, NodeId, NodeKind, Orientation, Placement, Size, Topology, TopologyError,
};
use crate::routing::address::{Address, MotAddress, MotGeometry, XyAddress};

/// Overrides applied while building.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildConfig {
    /// Replaces the default extra-link set of a diametrical family. The list
    /// must have exactly as many pairs as the default set.
    pub extra_links: Option<Vec<(NodeId, NodeId)>>,
}

fn unsupported(family: Family, size: Size, reason: impl Into<String>) -> TopologyError {
    TopologyError::SizeUnsupported {
        family: family.name().to_string(),
        rows: size.rows,
        cols: size.cols,
        reason: reason.into(),
    }
}

/// Builds the router graph and attaches the family's IP cores.
pub fn build_topology(family: Family, size: Size, config: &BuildConfig) -> Result<Topology, TopologyError> {
    attach_ips(build_router_graph(family, size, config)?)
}

/// Builds the router graph alone, with no IP cores attached.
pub fn build_router_graph(family: Family, size: Size, config: &BuildConfig) -> Result<Topology, TopologyError> {
    if config.extra_links.is_some() && !matches!(family, Family::D2DMesh | Family::D2DMoT) {
        return Err(TopologyError::InvalidAugmentation(format!("{family} has no extra-link set to override")));
    }
    let topo = match family {
        Family::Mesh => grid(family, size, false)?,
        Family::Torus => grid(family, size, true)?,
        Family::D2DMesh => d2d_mesh(size, config)?,
        Family::BinaryTree => binary_tree(size)?,
        Family::MoT => mesh_of_trees(family, size, None)?,
        Family::D2DMoT => mesh_of_trees(family, size, Some(config))?,
        Family::Custom => {
            return Err(unsupported(family, size, "custom topologies are loaded, not built"));
        }
    };
    check_family_invariants(&topo)?;
    Ok(topo)
}

/// Attaches IP cores: one per mesh switch, one per MoT leaf, two per D2D-MoT
/// leaf and four per binary-tree leaf.
pub fn attach_ips(topology: Topology) -> Result<Topology, TopologyError> {
    if topology.ip_count() > 0 {
        return Err(TopologyError::AlreadyAttached);
    }
    let per_endpoint = match topology.family() {
        Family::Mesh | Family::Torus | Family::D2DMesh | Family::MoT | Family::Custom => 1,
        Family::D2DMoT => 2,
        Family::BinaryTree => 4,
    };
    let ips: BTreeMap<NodeId, u32> = topology.endpoints().into_iter().map(|id| (id, per_endpoint)).collect();
    Ok(topology.with_ips(ips))
}

fn grid_nodes(rows: u32, cols: u32) -> Vec<Node> {
    (0..rows * cols)
        .map(|i| Node {
            id: NodeId(i),
            kind: NodeKind::MeshSwitch,
            address: Some(Address::Xy(XyAddress::new(i / cols, i % cols))),
        })
        .collect()
}

fn grid_links(rows: u32, cols: u32) -> Vec<Link> {
    let id = |r: u32, c: u32| NodeId(r * cols + c);
    let mut links = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                links.push(Link { a: id(r, c), b: id(r, c + 1), kind: LinkKind::MeshGrid });
            }
            if r + 1 < rows {
                links.push(Link { a: id(r, c), b: id(r + 1, c), kind: LinkKind::MeshGrid });
            }
        }
    }
    links
}

fn grid(family: Family, size: Size, wrap: bool) -> Result<Topology, TopologyError> {
    let Size { rows, cols } = size;
    if rows < 2 || cols < 2 {
        return Err(unsupported(family, size, "both dimensions must be at least 2"));
    }
    let mut links = grid_links(rows, cols);
    if wrap {
        let id = |r: u32, c: u32| NodeId(r * cols + c);
        // a 2-wide ring already has its wrap link as a grid link
        if cols >= 3 {
            for r in 0..rows {
                links.push(Link { a: id(r, 0), b: id(r, cols - 1), kind: LinkKind::Wraparound });
            }
        }
        if rows >= 3 {
            for c in 0..cols {
                links.push(Link { a: id(0, c), b: id(rows - 1, c), kind: LinkKind::Wraparound });
            }
        }
    }
    Topology::from_parts(family, size, grid_nodes(rows, cols), links, BTreeMap::new())
}

/// The default extra links of a diametrical family, as `(a, b, kind)`.
///
/// Diametrical mesh: the two corner diagonals, the four corner edge wraps and
/// the two mid-edge crosses. D2D-MoT: both diagonals of every 2x2 leaf module,
/// plus one shortcut between the row-tree roots of the middle row pair and one
/// between the column-tree roots of the middle column pair.
pub fn default_extra_links(family: Family, size: Size) -> Result<Vec<(NodeId, NodeId, LinkKind)>, TopologyError> {
    match family {
        Family::D2DMesh => {
            let Size { rows: m, cols: n } = size;
            if m < 3 || n < 3 {
                return Err(unsupported(family, size, "the default diameter links need at least 3x3"));
            }
            let id = |r: u32, c: u32| NodeId(r * n + c);
            let pairs = [
                (id(0, 0), id(m - 1, n - 1)),
                (id(0, n - 1), id(m - 1, 0)),
                (id(0, 0), id(0, n - 1)),
                (id(m - 1, 0), id(m - 1, n - 1)),
                (id(0, 0), id(m - 1, 0)),
                (id(0, n - 1), id(m - 1, n - 1)),
                (id(0, n / 2), id(m - 1, n / 2)),
                (id(m / 2, 0), id(m / 2, n - 1)),
            ];
            Ok(pairs.into_iter().map(|(a, b)| (a, b, LinkKind::DiameterChannel)).collect())
        }
        Family::D2DMoT => {
            let geo = mot_geometry(family, size)?;
            let layout = MotLayout::new(geo);
            let mut extra = Vec::new();
            for r in (0..geo.rows).step_by(2) {
                for c in (0..geo.cols).step_by(2) {
                    extra.push((layout.leaf(r, c), layout.leaf(r + 1, c + 1), LinkKind::DiagonalModule));
                    extra.push((layout.leaf(r, c + 1), layout.leaf(r + 1, c), LinkKind::DiagonalModule));
                }
            }
            let (r0, r1) = (geo.rows / 2 - 1, geo.rows / 2);
            let (c0, c1) = (geo.cols / 2 - 1, geo.cols / 2);
            extra.push((layout.row_node(r0, 0, 0), layout.row_node(r1, 0, 0), LinkKind::RootShortcut));
            extra.push((layout.column_node(c0, 0, 0), layout.column_node(c1, 0, 0), LinkKind::RootShortcut));
            Ok(extra)
        }
        _ => Err(TopologyError::InvalidAugmentation(format!("{family} has no extra links"))),
    }
}

/// Turns an override list into typed extra links after checking it.
fn override_links(
    family: Family,
    size: Size,
    base: &[Link],
    nodes: &[Node],
    pairs: &[(NodeId, NodeId)],
) -> Result<Vec<(NodeId, NodeId, LinkKind)>, TopologyError> {
    let required = default_extra_links(family, size)?.len();
    if pairs.len() != required {
        return Err(TopologyError::InvalidAugmentation(format!(
            "{family} {}x{} needs exactly {required} extra links, got {}",
            size.rows,
            size.cols,
            pairs.len()
        )));
    }
    let mut seen: HashSet<(NodeId, NodeId)> = base.iter().map(|l| (l.a, l.b)).collect();
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if b.index() >= nodes.len() {
            return Err(TopologyError::InvalidAugmentation(format!("link {a}-{b} references a missing node")));
        }
        if a == b {
            return Err(TopologyError::InvalidAugmentation(format!("self-loop at {a}")));
        }
        if !seen.insert((a, b)) {
            return Err(TopologyError::InvalidAugmentation(format!("link {a}-{b} already exists")));
        }
        let kind = match family {
            Family::D2DMesh => LinkKind::DiameterChannel,
            _ => match (nodes[a.index()].kind, nodes[b.index()].kind) {
                (NodeKind::Leaf, NodeKind::Leaf) => LinkKind::DiagonalModule,
                (NodeKind::Root { .. }, NodeKind::Root { .. }) => LinkKind::RootShortcut,
                _ => {
                    return Err(TopologyError::InvalidAugmentation(format!(
                        "link {a}-{b} must join two leaves or two roots"
                    )))
                }
            },
        };
        out.push((a, b, kind));
    }
    Ok(out)
}

fn d2d_mesh(size: Size, config: &BuildConfig) -> Result<Topology, TopologyError> {
    let family = Family::D2DMesh;
    if size.rows < 3 || size.cols < 3 {
        return Err(unsupported(family, size, "the diameter links need at least 3x3"));
    }
    let nodes = grid_nodes(size.rows, size.cols);
    let mut links = grid_links(size.rows, size.cols);
    let extra = match &config.extra_links {
        Some(pairs) => override_links(family, size, &links, &nodes, pairs)?,
        None => default_extra_links(family, size)?,
    };
    links.extend(extra.into_iter().map(|(a, b, kind)| Link { a, b, kind }));
    Topology::from_parts(family, size, nodes, links, BTreeMap::new())
}

/// A complete binary tree of `N - 1` routers in heap order (node `i` has
/// children `2i + 1` and `2i + 2`).
fn binary_tree(size: Size) -> Result<Topology, TopologyError> {
    let family = Family::BinaryTree;
    let n = size.rows;
    if n < 2 || !n.is_power_of_two() {
        return Err(unsupported(family, size, "N must be a power of two, at least 2"));
    }
    let routers = n - 1;
    let first_leaf = routers / 2;
    let nodes = (0..routers)
        .map(|i| {
            let kind = if i >= first_leaf {
                NodeKind::Leaf
            } else if i == 0 {
                NodeKind::Root { orientation: Orientation::Row, placement: Placement::External }
            } else {
                NodeKind::Stem { orientation: Orientation::Row }
            };
            Node { id: NodeId(i), kind, address: None }
        })
        .collect();
    let links = (1..routers)
        .map(|i| Link { a: NodeId((i - 1) / 2), b: NodeId(i), kind: LinkKind::Tree })
        .collect();
    Topology::from_parts(family, size, nodes, links, BTreeMap::new())
}

fn mot_geometry(family: Family, size: Size) -> Result<MotGeometry, TopologyError> {
    MotGeometry::new(size.rows, size.cols)
        .ok_or_else(|| unsupported(family, size, "rows and columns must be powers of two, at least 2"))
}

/// NodeId layout of a mesh-of-trees: leaves row-major, then row-tree
/// internals by (row, level, position), then column-tree internals by
/// (column, level, position).
#[derive(Debug, Clone, Copy)]
pub(crate) struct MotLayout {
    geo: MotGeometry,
}

impl MotLayout {
    pub(crate) fn new(geo: MotGeometry) -> Self {
        Self { geo }
    }

    pub(crate) fn leaf(&self, row: u32, col: u32) -> NodeId {
        NodeId(row * self.geo.cols + col)
    }

    /// Internal node `(level, pos)` of row tree `row`; `level < row_depth`.
    pub(crate) fn row_node(&self, row: u32, level: u8, pos: u32) -> NodeId {
        let leaves = self.geo.rows * self.geo.cols;
        let per_tree = self.geo.cols - 1;
        NodeId(leaves + row * per_tree + (1u32 << level) - 1 + pos)
    }

    pub(crate) fn column_node(&self, col: u32, level: u8, pos: u32) -> NodeId {
        let leaves = self.geo.rows * self.geo.cols;
        let row_internals = self.geo.rows * (self.geo.cols - 1);
        let per_tree = self.geo.rows - 1;
        NodeId(leaves + row_internals + col * per_tree + (1u32 << level) - 1 + pos)
    }

    fn node_count(&self) -> u32 {
        3 * self.geo.rows * self.geo.cols - self.geo.rows - self.geo.cols
    }
}

fn mesh_of_trees(family: Family, size: Size, augment: Option<&BuildConfig>) -> Result<Topology, TopologyError> {
    let geo = mot_geometry(family, size)?;
    let layout = MotLayout::new(geo);
    let mut nodes: Vec<Node> = Vec::with_capacity(layout.node_count() as usize);

    let internal_rows = [geo.rows / 2 - 1, geo.rows / 2];
    let internal_cols = [geo.cols / 2 - 1, geo.cols / 2];
    let tree_kind = |orientation: Orientation, level: u8, index: u32| {
        if level > 0 {
            return NodeKind::Stem { orientation };
        }
        let internal = family == Family::D2DMoT
            && match orientation {
                Orientation::Row => internal_rows.contains(&index),
                Orientation::Col => internal_cols.contains(&index),
            };
        let placement = if internal { Placement::Internal } else { Placement::External };
        NodeKind::Root { orientation, placement }
    };

    for r in 0..geo.rows {
        for c in 0..geo.cols {
            let addr = MotAddress::leaf(r, c, &geo);
            nodes.push(Node { id: layout.leaf(r, c), kind: NodeKind::Leaf, address: Some(Address::Mot(addr)) });
        }
    }
    for r in 0..geo.rows {
        for level in 0..geo.row_depth {
            for pos in 0..(1u32 << level) {
                nodes.push(Node {
                    id: layout.row_node(r, level, pos),
                    kind: tree_kind(Orientation::Row, level, r),
                    address: Some(Address::Mot(MotAddress::row_node(r, level, pos, &geo))),
                });
            }
        }
    }
    for c in 0..geo.cols {
        for level in 0..geo.col_depth {
            for pos in 0..(1u32 << level) {
                nodes.push(Node {
                    id: layout.column_node(c, level, pos),
                    kind: tree_kind(Orientation::Col, level, c),
                    address: Some(Address::Mot(MotAddress::column_node(c, level, pos, &geo))),
                });
            }
        }
    }
    debug_assert!(nodes.iter().enumerate().all(|(i, n)| n.id.index() == i));

    let mut links = Vec::new();
    for r in 0..geo.rows {
        for level in 0..geo.row_depth {
            for pos in 0..(1u32 << level) {
                let parent = layout.row_node(r, level, pos);
                for child_pos in [2 * pos, 2 * pos + 1] {
                    let child = if level + 1 == geo.row_depth {
                        layout.leaf(r, child_pos)
                    } else {
                        layout.row_node(r, level + 1, child_pos)
                    };
                    links.push(Link { a: child.min(parent), b: child.max(parent), kind: LinkKind::Tree });
                }
            }
        }
    }
    for c in 0..geo.cols {
        for level in 0..geo.col_depth {
            for pos in 0..(1u32 << level) {
                let parent = layout.column_node(c, level, pos);
                for child_pos in [2 * pos, 2 * pos + 1] {
                    let child = if level + 1 == geo.col_depth {
                        layout.leaf(child_pos, c)
                    } else {
                        layout.column_node(c, level + 1, child_pos)
                    };
                    links.push(Link { a: child.min(parent), b: child.max(parent), kind: LinkKind::Tree });
                }
            }
        }
    }

    if let Some(config) = augment {
        let extra = match &config.extra_links {
            Some(pairs) => {
                let extra = override_links(family, size, &links, &nodes, pairs)?;
                // roots joined by a shortcut are the internal ones
                for node in nodes.iter_mut() {
                    if let NodeKind::Root { orientation, .. } = node.kind {
                        let joined = extra
                            .iter()
                            .any(|&(a, b, k)| k == LinkKind::RootShortcut && (a == node.id || b == node.id));
                        let placement = if joined { Placement::Internal } else { Placement::External };
                        node.kind = NodeKind::Root { orientation, placement };
                    }
                }
                extra
            }
            None => default_extra_links(family, size)?,
        };
        links.extend(extra.into_iter().map(|(a, b, kind)| Link { a, b, kind }));
    }
    Topology::from_parts(family, size, nodes, links, BTreeMap::new())
}

fn check_family_invariants(topo: &Topology) -> Result<(), TopologyError> {
    let Size { rows: m, cols: n } = topo.size();
    let fail = |what: String| Err(TopologyError::Malformed(what));
    match topo.family() {
        Family::MoT | Family::D2DMoT => {
            let expected = (3 * m * n - (m + n)) as usize;
            if topo.node_count() != expected {
                return fail(format!("mesh-of-trees has {} nodes, expected {expected}", topo.node_count()));
            }
            if topo.family() == Family::D2DMoT && (m, n) == (4, 4) && topo.link_count() != 58 {
                return fail(format!("4x4 D2D-MoT has {} links, expected 58", topo.link_count()));
            }
        }
        Family::D2DMesh => {
            let mesh_links = (2 * m * n - m - n) as usize;
            if topo.link_count() != mesh_links + 8 {
                return fail(format!("diametrical mesh has {} links, expected {}", topo.link_count(), mesh_links + 8));
            }
        }
        _ => {}
    }
    Ok(())
}
