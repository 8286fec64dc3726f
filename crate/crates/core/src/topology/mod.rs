//! Router graphs for the supported fabric families.
//!
//! A [`Topology`] is an undirected simple graph of routers. Every link carries
//! two directed channels, numbered `2 * link + 0` (low id to high id) and
//! `2 * link + 1` (high to low). Topologies are immutable once built.

mod build;
mod params;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::routing::address::{Address, MotAddress, MotGeometry, XyAddress};

pub use build::{attach_ips, build_router_graph, build_topology, default_extra_links, BuildConfig};
pub use params::{params_for, DegreeRole, ParamFamily, TopoParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinkId(pub u32);

/// One direction of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChannelId(pub u32);

impl ChannelId {
    pub fn link(self) -> LinkId {
        LinkId(self.0 / 2)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Row,
    Col,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Internal,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeKind {
    MeshSwitch,
    Leaf,
    Stem { orientation: Orientation },
    Root { orientation: Orientation, placement: Placement },
    /// Router of a user-supplied graph.
    Generic,
}

impl NodeKind {
    pub fn is_endpoint(&self) -> bool {
        matches!(self, NodeKind::MeshSwitch | NodeKind::Leaf | NodeKind::Generic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Tree,
    MeshGrid,
    Wraparound,
    DiagonalModule,
    RootShortcut,
    DiameterChannel,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Mesh,
    Torus,
    BinaryTree,
    #[serde(rename = "mot")]
    MoT,
    #[serde(rename = "d2d_mesh")]
    D2DMesh,
    #[serde(rename = "d2d_mot")]
    D2DMoT,
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Mesh => "mesh",
            Family::Torus => "torus",
            Family::BinaryTree => "binary_tree",
            Family::MoT => "mot",
            Family::D2DMesh => "d2d_mesh",
            Family::D2DMoT => "d2d_mot",
            Family::Custom => "custom",
        }
    }

    /// Buildable families by name; see [`ParamFamily::parse`].
    pub fn parse(s: &str) -> Option<Self> {
        ParamFamily::parse(s)?.buildable()
    }

    pub fn is_mot_family(&self) -> bool {
        matches!(self, Family::MoT | Family::D2DMoT)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Size argument of a build. Single-parameter families (binary tree, and the
/// calculator-only families) read `rows` as their `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Size {
    pub rows: u32,
    pub cols: u32,
}

impl Size {
    pub const fn new(rows: u32, cols: u32) -> Self {
        Self { rows, cols }
    }

    pub const fn square(n: u32) -> Self {
        Self { rows: n, cols: n }
    }

    pub const fn single(n: u32) -> Self {
        Self { rows: n, cols: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub address: Option<Address>,
}

/// An undirected link; `a < b` always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub kind: LinkKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{family} does not support size {rows}x{cols}: {reason}")]
    SizeUnsupported { family: String, rows: u32, cols: u32, reason: String },
    #[error("invalid augmentation: {0}")]
    InvalidAugmentation(String),
    #[error("IP cores are already attached")]
    AlreadyAttached,
    #[error("topology is disconnected: node {0} unreachable from node 0")]
    Disconnected(NodeId),
    #[error("malformed topology: {0}")]
    Malformed(String),
    #[error("topology document: {0}")]
    Json(String),
}

impl TopologyError {
    pub fn code(&self) -> &'static str {
        match self {
            TopologyError::SizeUnsupported { .. } => "SizeUnsupported",
            TopologyError::InvalidAugmentation(_) => "InvalidAugmentation",
            TopologyError::AlreadyAttached => "AlreadyAttached",
            TopologyError::Disconnected(_) => "Disconnected",
            TopologyError::Malformed(_) => "Malformed",
            TopologyError::Json(_) => "Json",
        }
    }
}

/// Serialized form, also the JSON document layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TopologyDocument {
    family: Family,
    params: Size,
    nodes: Vec<Node>,
    links: Vec<Link>,
    ips: BTreeMap<NodeId, u32>,
}

#[derive(Debug, Clone)]
pub struct Topology {
    family: Family,
    size: Size,
    nodes: Vec<Node>,
    links: Vec<Link>,
    ips: BTreeMap<NodeId, u32>,
    /// Per node: (neighbor, link) sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, LinkId)>>,
    link_lookup: HashMap<(NodeId, NodeId), LinkId>,
}

impl Topology {
    /// Assembles and checks a topology. Links are normalized to `a < b`.
    pub fn from_parts(
        family: Family,
        size: Size,
        nodes: Vec<Node>,
        links: Vec<Link>,
        ips: BTreeMap<NodeId, u32>,
    ) -> Result<Self, TopologyError> {
        for (i, n) in nodes.iter().enumerate() {
            if n.id.index() != i {
                return Err(TopologyError::Malformed(format!("node {} listed at position {i}", n.id)));
            }
        }
        let count = nodes.len();
        let mut adjacency = vec![Vec::new(); count];
        let mut link_lookup = HashMap::with_capacity(links.len());
        let mut normalized = Vec::with_capacity(links.len());
        for (i, l) in links.iter().enumerate() {
            let (a, b) = if l.a <= l.b { (l.a, l.b) } else { (l.b, l.a) };
            if a == b {
                return Err(TopologyError::Malformed(format!("self-loop at node {a}")));
            }
            if b.index() >= count {
                return Err(TopologyError::Malformed(format!("link references missing node {b}")));
            }
            let id = LinkId(i as u32);
            if link_lookup.insert((a, b), id).is_some() {
                return Err(TopologyError::Malformed(format!("duplicate link {a}-{b}")));
            }
            adjacency[a.index()].push((b, id));
            adjacency[b.index()].push((a, id));
            normalized.push(Link { a, b, kind: l.kind });
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        for id in ips.keys() {
            if id.index() >= count {
                return Err(TopologyError::Malformed(format!("IP attachment on missing node {id}")));
            }
        }
        let topo = Self { family, size, nodes, links: normalized, ips, adjacency, link_lookup };
        topo.check_connected()?;
        Ok(topo)
    }

    fn check_connected(&self) -> Result<(), TopologyError> {
        if self.nodes.is_empty() {
            return Err(TopologyError::Malformed("no routers".into()));
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([NodeId(0)]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u.index()] {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    queue.push_back(v);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(TopologyError::Disconnected(NodeId(i as u32))),
            None => Ok(()),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn size(&self) -> Size {
        self.size
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn channel_count(&self) -> usize {
        2 * self.links.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id.0 as usize]
    }

    pub fn ips(&self) -> &BTreeMap<NodeId, u32> {
        &self.ips
    }

    pub fn ip_count(&self) -> u32 {
        self.ips.values().sum()
    }

    pub fn ips_at(&self, id: NodeId) -> u32 {
        self.ips.get(&id).copied().unwrap_or(0)
    }

    /// Neighbors of `id` with the connecting link, ascending by neighbor id.
    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, LinkId)] {
        &self.adjacency[id.index()]
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency[id.index()].len()
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<LinkId> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.link_lookup.get(&key).copied()
    }

    pub fn are_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.link_between(a, b).is_some()
    }

    /// The directed channel `from -> to`, if the two routers are linked.
    pub fn channel(&self, from: NodeId, to: NodeId) -> Option<ChannelId> {
        self.link_between(from, to).map(|l| ChannelId(2 * l.0 + u32::from(from > to)))
    }

    /// `(tail, head)` of a channel.
    pub fn channel_endpoints(&self, ch: ChannelId) -> (NodeId, NodeId) {
        let link = self.link(ch.link());
        if ch.0.is_multiple_of(2) {
            (link.a, link.b)
        } else {
            (link.b, link.a)
        }
    }

    /// Routers that may host IP cores: mesh switches and tree leaves.
    pub fn endpoints(&self) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| n.kind.is_endpoint()).map(|n| n.id).collect()
    }

    pub fn xy_address(&self, id: NodeId) -> Option<XyAddress> {
        self.nodes[id.index()].address.and_then(|a| a.as_xy())
    }

    pub fn mot_address(&self, id: NodeId) -> Option<MotAddress> {
        self.nodes[id.index()].address.and_then(|a| a.as_mot())
    }

    pub fn mot_geometry(&self) -> Option<MotGeometry> {
        if self.family.is_mot_family() {
            MotGeometry::new(self.size.rows, self.size.cols)
        } else {
            None
        }
    }

    pub fn links_of_kind(&self, kind: LinkKind) -> impl Iterator<Item = &Link> + '_ {
        self.links.iter().filter(move |l| l.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.document()).expect("topology serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TopologyError> {
        let doc: TopologyDocument = serde_json::from_str(text).map_err(|e| TopologyError::Json(e.to_string()))?;
        Self::from_parts(doc.family, doc.params, doc.nodes, doc.links, doc.ips)
    }

    fn document(&self) -> TopologyDocument {
        TopologyDocument {
            family: self.family,
            params: self.size,
            nodes: self.nodes.clone(),
            links: self.links.clone(),
            ips: self.ips.clone(),
        }
    }

    pub(crate) fn with_ips(mut self, ips: BTreeMap<NodeId, u32>) -> Self {
        self.ips = ips;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Topology {
        let nodes = (0..3).map(|i| Node { id: NodeId(i), kind: NodeKind::Generic, address: None }).collect();
        let links = vec![
            Link { a: NodeId(1), b: NodeId(0), kind: LinkKind::Generic },
            Link { a: NodeId(1), b: NodeId(2), kind: LinkKind::Generic },
        ];
        Topology::from_parts(Family::Custom, Size::single(3), nodes, links, BTreeMap::new()).unwrap()
    }

    #[test]
    fn channels_are_numbered_per_direction() {
        let t = path3();
        assert_eq!(t.links()[0].a, NodeId(0));
        assert_eq!(t.channel(NodeId(0), NodeId(1)), Some(ChannelId(0)));
        assert_eq!(t.channel(NodeId(1), NodeId(0)), Some(ChannelId(1)));
        assert_eq!(t.channel_endpoints(ChannelId(3)), (NodeId(2), NodeId(1)));
        assert_eq!(t.channel(NodeId(0), NodeId(2)), None);
    }

    #[test]
    fn rejects_self_loops_duplicates_and_disconnection() {
        let nodes: Vec<Node> =
            (0..3).map(|i| Node { id: NodeId(i), kind: NodeKind::Generic, address: None }).collect();
        let g = |links: Vec<(u32, u32)>| {
            let links = links.into_iter().map(|(a, b)| Link { a: NodeId(a), b: NodeId(b), kind: LinkKind::Generic });
            Topology::from_parts(Family::Custom, Size::single(3), nodes.clone(), links.collect(), BTreeMap::new())
        };
        assert!(matches!(g(vec![(0, 0), (1, 2)]), Err(TopologyError::Malformed(_))));
        assert!(matches!(g(vec![(0, 1), (1, 0), (1, 2)]), Err(TopologyError::Malformed(_))));
        assert_eq!(g(vec![(0, 1)]).unwrap_err(), TopologyError::Disconnected(NodeId(2)));
    }
}
