//! Router addressing schemes.
//!
//! Mesh-style fabrics (mesh, torus, diametrical mesh) label routers by
//! `(x, y)` = (row, column). Mesh-of-trees fabrics use a four-field address:
//! row number, column level, column number and row level. The row and column
//! numbers are stored as binary prefixes so that an internal tree node can be
//! compared against a leaf destination: a node "matches" a row iff the row
//! index starts with the node's prefix.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Coordinates of a router in a 2D grid: `x` is the row, `y` the column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XyAddress {
    pub x: u32,
    pub y: u32,
}

impl XyAddress {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn manhattan(&self, other: &XyAddress) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    /// Bits needed for one address field of a dimension with `dim` entries.
    pub fn field_bits(dim: u32) -> u32 {
        if dim <= 1 {
            1
        } else {
            u32::BITS - (dim - 1).leading_zeros()
        }
    }

    /// Packs the address as `x` bits followed by `y` bits.
    pub fn encode(&self, cols: u32) -> u64 {
        ((self.x as u64) << Self::field_bits(cols)) | self.y as u64
    }

    /// The address as a fixed-width binary label, e.g. `"0111"` for (1,3) in a 4x4 grid.
    pub fn to_bit_string(&self, rows: u32, cols: u32) -> String {
        let xb = Self::field_bits(rows) as usize;
        let yb = Self::field_bits(cols) as usize;
        format!("{:0xb$b}{:0yb$b}", self.x, self.y)
    }
}

impl fmt::Display for XyAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A binary prefix of a row or column index. `len` is the number of leading
/// bits fixed; a full-length prefix names exactly one row/column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prefix {
    pub value: u32,
    pub len: u8,
}

impl Prefix {
    pub const fn new(value: u32, len: u8) -> Self {
        Self { value, len }
    }

    /// Whether `index` (an index with `depth` bits) starts with this prefix.
    pub fn covers(&self, index: u32, depth: u8) -> bool {
        debug_assert!(self.len <= depth);
        (index >> (depth - self.len)) == self.value
    }

    pub fn parent(&self) -> Option<Prefix> {
        (self.len > 0).then(|| Prefix::new(self.value >> 1, self.len - 1))
    }

    /// The one-bit-longer prefix on the way to `index`.
    pub fn child_toward(&self, index: u32, depth: u8) -> Prefix {
        debug_assert!(self.len < depth);
        Prefix::new(index >> (depth - self.len - 1), self.len + 1)
    }
}

/// Depths of the two tree systems of an `M x N` mesh-of-trees.
///
/// Column trees span the `M` rows, so they have `log2 M` levels below the
/// root; row trees span the `N` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MotGeometry {
    pub rows: u32,
    pub cols: u32,
    pub col_depth: u8,
    pub row_depth: u8,
}

impl MotGeometry {
    /// `None` unless both dimensions are powers of two and at least 2.
    pub fn new(rows: u32, cols: u32) -> Option<Self> {
        if rows < 2 || cols < 2 || !rows.is_power_of_two() || !cols.is_power_of_two() {
            return None;
        }
        Some(Self {
            rows,
            cols,
            col_depth: rows.trailing_zeros() as u8,
            row_depth: cols.trailing_zeros() as u8,
        })
    }
}

/// Position of a mesh-of-trees router, decoded from its address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MotRole {
    Leaf { row: u32, col: u32 },
    /// Internal node of column tree `col`, `level` 0 being the root.
    ColumnTree { col: u32, level: u8, pos: u32 },
    /// Internal node of row tree `row`.
    RowTree { row: u32, level: u8, pos: u32 },
}

/// Four-field mesh-of-trees address (RN, CL, CN, RL) plus the destination core.
///
/// `cl` always equals `rn.len` and `rl` equals `cn.len`; the level fields are
/// kept because the routing rules compare them directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotAddress {
    pub rn: Prefix,
    pub cl: u8,
    pub cn: Prefix,
    pub rl: u8,
    /// Which of the attached cores a packet is for. Zero on router addresses.
    pub core_id: u8,
}

impl MotAddress {
    pub fn leaf(row: u32, col: u32, geo: &MotGeometry) -> Self {
        Self {
            rn: Prefix::new(row, geo.col_depth),
            cl: geo.col_depth,
            cn: Prefix::new(col, geo.row_depth),
            rl: geo.row_depth,
            core_id: 0,
        }
    }

    pub fn column_node(col: u32, level: u8, pos: u32, geo: &MotGeometry) -> Self {
        Self {
            rn: Prefix::new(pos, level),
            cl: level,
            cn: Prefix::new(col, geo.row_depth),
            rl: geo.row_depth,
            core_id: 0,
        }
    }

    pub fn row_node(row: u32, level: u8, pos: u32, geo: &MotGeometry) -> Self {
        Self {
            rn: Prefix::new(row, geo.col_depth),
            cl: geo.col_depth,
            cn: Prefix::new(pos, level),
            rl: level,
            core_id: 0,
        }
    }

    pub fn with_core(mut self, core_id: u8) -> Self {
        self.core_id = core_id;
        self
    }

    /// The router part of the address (core id cleared).
    pub fn router(mut self) -> Self {
        self.core_id = 0;
        self
    }

    pub fn role(&self, geo: &MotGeometry) -> MotRole {
        let full_row = self.cl == geo.col_depth;
        let full_col = self.rl == geo.row_depth;
        match (full_row, full_col) {
            (true, true) => MotRole::Leaf { row: self.rn.value, col: self.cn.value },
            (false, _) => MotRole::ColumnTree { col: self.cn.value, level: self.cl, pos: self.rn.value },
            (true, false) => MotRole::RowTree { row: self.rn.value, level: self.rl, pos: self.cn.value },
        }
    }

    pub fn is_leaf(&self, geo: &MotGeometry) -> bool {
        matches!(self.role(geo), MotRole::Leaf { .. })
    }

    /// Checks the field relations that every address of `geo` satisfies.
    pub fn is_consistent(&self, geo: &MotGeometry) -> bool {
        let in_range = |p: &Prefix| p.value < (1u32 << p.len);
        self.cl == self.rn.len
            && self.rl == self.cn.len
            && self.cl <= geo.col_depth
            && self.rl <= geo.row_depth
            && in_range(&self.rn)
            && in_range(&self.cn)
            // a router sits on at most one partial prefix
            && (self.cl == geo.col_depth || self.rl == geo.row_depth)
    }
}

impl fmt::Display for MotAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RN={:0w1$b}/{} CL={} CN={:0w2$b}/{} RL={}",
            self.rn.value,
            self.rn.len,
            self.cl,
            self.cn.value,
            self.cn.len,
            self.rl,
            w1 = self.rn.len as usize,
            w2 = self.cn.len as usize,
        )
    }
}

/// Hop distance between two leaves of one complete binary tree.
pub fn tree_distance(a: u32, b: u32) -> u32 {
    2 * (u32::BITS - (a ^ b).leading_zeros())
}

/// Address attached to a router in a serialized topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Address {
    Xy(XyAddress),
    Mot(MotAddress),
}

impl Address {
    pub fn as_xy(&self) -> Option<XyAddress> {
        match self {
            Address::Xy(a) => Some(*a),
            Address::Mot(_) => None,
        }
    }

    pub fn as_mot(&self) -> Option<MotAddress> {
        match self {
            Address::Mot(a) => Some(*a),
            Address::Xy(_) => None,
        }
    }
}
