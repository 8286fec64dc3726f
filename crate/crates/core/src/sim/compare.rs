use rayon::prelude::*;
use serde::Serialize;

use super::{simulate, SimConfig, SimError, SimStats, TrafficPattern};
use crate::routing::{D2dMotRouter, MotRouter, XyRouter};
use crate::topology::{build_topology, BuildConfig, Family, Size};

/// One row of the family comparison at D2DMoT size `n x n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub size: u32,
    /// IP cores of the D2DMoT network.
    pub ip_blocks: u32,
    pub mesh_side: u32,
    pub t_d2dmot: u64,
    pub t_mot: u64,
    pub t_mesh: u64,
    pub speedup_pct: f64,
    #[serde(skip)]
    pub stats: [SimStats; 3],
}

/// Smallest square mesh with at least as many IP cores as D2DMoT(n, n).
pub fn mesh_side_for(n: u32) -> u32 {
    let ips = 2 * n * n;
    let mut m = (ips as f64).sqrt() as u32;
    while m * m < ips {
        m += 1;
    }
    m
}

/// `(baseline - candidate) / baseline * 100`.
pub fn speedup_pct(baseline: u64, candidate: u64) -> f64 {
    if baseline == 0 {
        return 0.0;
    }
    (baseline as f64 - candidate as f64) / baseline as f64 * 100.0
}

/// Simulates D2DMoT(n,n), MoT(n,n) and the matching mesh for every `n`.
///
/// `config.injection` is the per-IP rate on D2DMoT; the other families get
/// the rate that keeps the network-wide offered load equal.
pub fn compare_families(sizes: &[u32], traffic: &TrafficPattern, config: &SimConfig) -> Result<Vec<ComparisonRow>, SimError> {
    config.validate()?;
    sizes
        .par_iter()
        .map(|&n| {
            let m = mesh_side_for(n);
            let jobs = [(Family::D2DMoT, n), (Family::MoT, n), (Family::Mesh, m)];
            let stats = jobs
                .par_iter()
                .map(|&(family, side)| run_family(family, side, 2 * n * n, traffic, config))
                .collect::<Result<Vec<_>, _>>()?;
            let [d, t, mesh]: [SimStats; 3] = stats.try_into().expect("three runs");
            Ok(ComparisonRow {
                size: n,
                ip_blocks: 2 * n * n,
                mesh_side: m,
                t_d2dmot: d.total_transfer_time,
                t_mot: t.total_transfer_time,
                t_mesh: mesh.total_transfer_time,
                speedup_pct: speedup_pct(mesh.total_transfer_time, d.total_transfer_time),
                stats: [d, t, mesh],
            })
        })
        .collect()
}

fn run_family(family: Family, side: u32, reference_ips: u32, traffic: &TrafficPattern, config: &SimConfig) -> Result<SimStats, SimError> {
    let topo = build_topology(family, Size::square(side), &BuildConfig::default())?;
    let scale = reference_ips as f64 / topo.ip_count() as f64;
    let injection = config.injection * scale;
    if injection > 100.0 {
        return Err(SimError::ConfigInvalid(format!(
            "{family} needs {injection:.2} packets per 100 cycles per IP to match the offered load"
        )));
    }
    let cfg = SimConfig { injection, ..config.clone() };
    match family {
        Family::D2DMoT => simulate(&topo, &D2dMotRouter::new(&topo)?, traffic, &cfg),
        Family::MoT => simulate(&topo, &MotRouter::new(&topo)?, traffic, &cfg),
        _ => simulate(&topo, &XyRouter::new(&topo)?, traffic, &cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_sides() {
        assert_eq!(mesh_side_for(4), 6);
        assert_eq!(mesh_side_for(8), 12);
        assert_eq!(mesh_side_for(2), 3);
    }

    #[test]
    fn speedup_against_self_is_zero() {
        assert_eq!(speedup_pct(1234, 1234), 0.0);
        assert_eq!(speedup_pct(200, 150), 25.0);
    }

    #[test]
    fn zero_injection_ends_at_warmup() {
        let cfg = SimConfig { injection: 0.0, ..SimConfig::default() };
        let rows = compare_families(&[2, 4], &TrafficPattern::UniformRandom, &cfg).unwrap();
        for r in rows {
            assert_eq!((r.t_d2dmot, r.t_mot, r.t_mesh), (200, 200, 200));
            assert_eq!(r.speedup_pct, 0.0);
        }
    }
}
