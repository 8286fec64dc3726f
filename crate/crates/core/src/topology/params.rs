use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Family, Size, TopologyError};

/// Families known to the parameter calculator. A superset of the buildable
/// [`Family`] values: folded torus, octagon, SPIN and butterfly fat tree have
/// formulas but no builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamFamily {
    Mesh,
    Torus,
    FoldedTorus,
    BinaryTree,
    Octagon,
    Spin,
    ButterflyFatTree,
    #[serde(rename = "mot")]
    MoT,
    #[serde(rename = "d2d_mesh")]
    D2DMesh,
    #[serde(rename = "d2d_mot")]
    D2DMoT,
}

impl ParamFamily {
    pub const ALL: [ParamFamily; 10] = [
        ParamFamily::Mesh,
        ParamFamily::Torus,
        ParamFamily::FoldedTorus,
        ParamFamily::BinaryTree,
        ParamFamily::Octagon,
        ParamFamily::Spin,
        ParamFamily::ButterflyFatTree,
        ParamFamily::MoT,
        ParamFamily::D2DMesh,
        ParamFamily::D2DMoT,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ParamFamily::Mesh => "mesh",
            ParamFamily::Torus => "torus",
            ParamFamily::FoldedTorus => "folded_torus",
            ParamFamily::BinaryTree => "binary_tree",
            ParamFamily::Octagon => "octagon",
            ParamFamily::Spin => "spin",
            ParamFamily::ButterflyFatTree => "butterfly_fat_tree",
            ParamFamily::MoT => "mot",
            ParamFamily::D2DMesh => "d2d_mesh",
            ParamFamily::D2DMoT => "d2d_mot",
        }
    }

    /// Accepts the snake_case name; case, `-` and `_` are ignored (`d2dmot`, `D2D-MoT`).
    pub fn parse(s: &str) -> Option<Self> {
        let key = |t: &str| t.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_ascii_lowercase();
        let want = key(s);
        Self::ALL.into_iter().find(|f| key(f.name()) == want)
    }

    /// Families that take a single `N` rather than `M x N`.
    pub fn is_single_parameter(&self) -> bool {
        matches!(self, ParamFamily::BinaryTree | ParamFamily::Octagon | ParamFamily::Spin | ParamFamily::ButterflyFatTree)
    }

    pub fn buildable(&self) -> Option<Family> {
        match self {
            ParamFamily::Mesh => Some(Family::Mesh),
            ParamFamily::Torus => Some(Family::Torus),
            ParamFamily::BinaryTree => Some(Family::BinaryTree),
            ParamFamily::MoT => Some(Family::MoT),
            ParamFamily::D2DMesh => Some(Family::D2DMesh),
            ParamFamily::D2DMoT => Some(Family::D2DMoT),
            _ => None,
        }
    }

    pub fn of(family: Family) -> Option<Self> {
        match family {
            Family::Mesh => Some(ParamFamily::Mesh),
            Family::Torus => Some(ParamFamily::Torus),
            Family::BinaryTree => Some(ParamFamily::BinaryTree),
            Family::MoT => Some(ParamFamily::MoT),
            Family::D2DMesh => Some(ParamFamily::D2DMesh),
            Family::D2DMoT => Some(ParamFamily::D2DMoT),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for ParamFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Router roles that the degree lists distinguish. Degrees count the attached
/// IP ports as well as router-to-router links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeRole {
    Corner,
    Boundary,
    Central,
    Any,
    Leaf,
    Stem,
    Root,
    InternalRoot,
    ExternalRoot,
    NonRoot,
    Member,
    Bridge,
}

/// Closed-form figures of merit. `None` where no formula is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopoParams {
    pub diameter: Option<u32>,
    pub bisection_width: Option<u32>,
    pub router_count: u64,
    pub node_degree: BTreeMap<DegreeRole, u32>,
    pub link_count: Option<u64>,
    pub ip_count: u64,
}

fn exact_log2(family: ParamFamily, size: Size, v: u32) -> Result<u32, TopologyError> {
    if v == 0 || !v.is_power_of_two() {
        return Err(TopologyError::SizeUnsupported {
            family: family.name().to_string(),
            rows: size.rows,
            cols: size.cols,
            reason: format!("{v} is not a power of two"),
        });
    }
    Ok(v.trailing_zeros())
}

fn ring_links(n: u64) -> u64 {
    // a ring of 2 is a single link; a ring of 1 has none
    match n {
        0 | 1 => 0,
        2 => 1,
        n => n,
    }
}

fn mesh_links(m: u64, n: u64) -> u64 {
    2 * m * n - m - n
}

/// Closed-form parameters of `family` at `size`. Single-parameter families
/// read `size.rows` as their `N`.
pub fn params_for(family: ParamFamily, size: Size) -> Result<TopoParams, TopologyError> {
    let Size { rows, cols } = size;
    let single = family.is_single_parameter();
    if rows == 0 || (!single && cols == 0) {
        return Err(TopologyError::SizeUnsupported {
            family: family.name().to_string(),
            rows,
            cols,
            reason: "size fields must be at least 1".into(),
        });
    }
    let (m, n) = (rows as u64, cols as u64);
    let degrees = |pairs: &[(DegreeRole, u32)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
    let p = match family {
        ParamFamily::Mesh => TopoParams {
            diameter: Some(rows + cols - 2),
            bisection_width: Some(rows.min(cols)),
            router_count: m * n,
            node_degree: degrees(&[(DegreeRole::Corner, 3), (DegreeRole::Boundary, 4), (DegreeRole::Central, 5)]),
            link_count: Some(mesh_links(m, n)),
            ip_count: m * n,
        },
        ParamFamily::Torus | ParamFamily::FoldedTorus => TopoParams {
            diameter: Some(rows / 2 + cols / 2),
            bisection_width: Some(2 * rows.min(cols)),
            router_count: m * n,
            node_degree: degrees(&[(DegreeRole::Any, 5)]),
            link_count: Some(m * ring_links(n) + n * ring_links(m)),
            ip_count: m * n,
        },
        ParamFamily::BinaryTree => {
            let log = exact_log2(family, size, rows)?;
            TopoParams {
                diameter: Some(log),
                bisection_width: Some(1),
                router_count: m - 1,
                node_degree: degrees(&[(DegreeRole::Leaf, 5), (DegreeRole::Stem, 3), (DegreeRole::Root, 2)]),
                link_count: Some(m.saturating_sub(2)),
                ip_count: m,
            }
        }
        ParamFamily::Octagon => {
            let k = rows / 8;
            let (bisection, routers) = if rows <= 8 { (6, 8) } else { (6 * (1 + k), 8 * (1 + k as u64) - k as u64) };
            TopoParams {
                diameter: Some(2 * k),
                bisection_width: Some(bisection),
                router_count: routers,
                node_degree: degrees(&[(DegreeRole::Member, 4), (DegreeRole::Bridge, 7)]),
                link_count: None,
                ip_count: m,
            }
        }
        ParamFamily::Spin => {
            let log = exact_log2(family, size, rows)?;
            if rows < 8 {
                return Err(TopologyError::SizeUnsupported {
                    family: family.name().to_string(),
                    rows,
                    cols,
                    reason: "the router count needs N >= 8".into(),
                });
            }
            TopoParams {
                diameter: Some(log),
                bisection_width: Some(rows / 2),
                router_count: m * (log as u64 - 3),
                node_degree: degrees(&[(DegreeRole::NonRoot, 8), (DegreeRole::Root, 4)]),
                link_count: None,
                ip_count: m,
            }
        }
        ParamFamily::ButterflyFatTree => {
            let log = exact_log2(family, size, rows)?;
            TopoParams {
                diameter: Some(log),
                bisection_width: Some((rows as f64).sqrt().floor() as u32),
                router_count: m / 2,
                node_degree: degrees(&[(DegreeRole::NonRoot, 6), (DegreeRole::Root, 4)]),
                link_count: None,
                ip_count: m,
            }
        }
        ParamFamily::MoT => {
            let (lm, ln) = (exact_log2(family, size, rows)?, exact_log2(family, size, cols)?);
            TopoParams {
                diameter: Some(2 * lm + 2 * ln),
                bisection_width: Some(rows.min(cols)),
                router_count: 3 * m * n - (m + n),
                node_degree: degrees(&[(DegreeRole::Leaf, 2), (DegreeRole::Stem, 3), (DegreeRole::Root, 18)]),
                link_count: Some(4 * m * n - 2 * m - 2 * n),
                ip_count: m * n,
            }
        }
        ParamFamily::D2DMesh => TopoParams {
            diameter: None,
            bisection_width: None,
            router_count: m * n,
            node_degree: BTreeMap::new(),
            link_count: Some(mesh_links(m, n) + 8),
            ip_count: m * n,
        },
        ParamFamily::D2DMoT => {
            exact_log2(family, size, rows)?;
            exact_log2(family, size, cols)?;
            TopoParams {
                diameter: None,
                bisection_width: None,
                router_count: 3 * m * n - (m + n),
                node_degree: degrees(&[
                    (DegreeRole::Leaf, 5),
                    (DegreeRole::Stem, 3),
                    (DegreeRole::InternalRoot, 3),
                    (DegreeRole::ExternalRoot, 2),
                ]),
                link_count: Some(3 * m * n + 10),
                ip_count: 2 * m * n,
            }
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!(ParamFamily::parse("d2dmot"), Some(ParamFamily::D2DMoT));
        assert_eq!(ParamFamily::parse("D2D-Mesh"), Some(ParamFamily::D2DMesh));
        assert_eq!(ParamFamily::parse("butterfly_fat_tree"), Some(ParamFamily::ButterflyFatTree));
        assert_eq!(ParamFamily::parse("hypercube"), None);
    }

    #[test]
    fn worked_values() {
        let mesh = params_for(ParamFamily::Mesh, Size::square(4)).unwrap();
        assert_eq!((mesh.diameter, mesh.bisection_width, mesh.router_count), (Some(6), Some(4), 16));
        let torus = params_for(ParamFamily::Torus, Size::square(4)).unwrap();
        assert_eq!((torus.diameter, torus.bisection_width), (Some(4), Some(8)));
        let mot = params_for(ParamFamily::MoT, Size::square(4)).unwrap();
        assert_eq!((mot.diameter, mot.router_count), (Some(8), 40));
        let d2d = params_for(ParamFamily::D2DMoT, Size::square(4)).unwrap();
        assert_eq!((d2d.router_count, d2d.link_count, d2d.ip_count), (40, Some(58), 32));
    }

    #[test]
    fn square_mot_matches_single_parameter_forms() {
        // 4 log2 N and 3N^2 - 2N
        for n in [2u32, 4, 8, 16] {
            let p = params_for(ParamFamily::MoT, Size::square(n)).unwrap();
            assert_eq!(p.diameter, Some(4 * n.trailing_zeros()));
            assert_eq!(p.router_count, 3 * (n as u64).pow(2) - 2 * n as u64);
        }
    }

    #[test]
    fn calculator_only_families() {
        let oct = params_for(ParamFamily::Octagon, Size::single(8)).unwrap();
        assert_eq!((oct.diameter, oct.bisection_width, oct.router_count), (Some(2), Some(6), 8));
        let oct = params_for(ParamFamily::Octagon, Size::single(16)).unwrap();
        assert_eq!((oct.diameter, oct.bisection_width, oct.router_count), (Some(4), Some(18), 22));
        let spin = params_for(ParamFamily::Spin, Size::single(64)).unwrap();
        assert_eq!((spin.diameter, spin.bisection_width, spin.router_count), (Some(6), Some(32), 192));
        let bft = params_for(ParamFamily::ButterflyFatTree, Size::single(64)).unwrap();
        assert_eq!((bft.diameter, bft.bisection_width, bft.router_count), (Some(6), Some(8), 32));
        let folded = params_for(ParamFamily::FoldedTorus, Size::new(3, 5)).unwrap();
        assert_eq!((folded.diameter, folded.bisection_width), (Some(3), Some(6)));
    }

    #[test]
    fn log_formulas_reject_non_powers() {
        for fam in [ParamFamily::MoT, ParamFamily::BinaryTree, ParamFamily::Spin] {
            let err = params_for(fam, Size::square(6)).unwrap_err();
            assert_eq!(err.code(), "SizeUnsupported");
        }
        assert!(params_for(ParamFamily::Mesh, Size::new(0, 3)).is_err());
    }
}
