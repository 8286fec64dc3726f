use std::io::Write;

use serde::Serialize;

use super::IoError;
use crate::analysis::{all_pairs_metrics, build_cdg, is_deadlock_free};
use crate::routing::{router_for, RoutingKind};
use crate::sim::{ComparisonRow, SimConfig, SimStats};
use crate::topology::{params_for, Family, ParamFamily, Topology};
use crate::Error;

/// One row of the metrics report. Distances are between routers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub family: Family,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub nodes: usize,
    pub links: usize,
    pub diameter_formula: Option<u32>,
    pub diameter_measured: u32,
    pub avg_hops: f64,
    /// CDG verdict for the family's native routing.
    pub deadlock_free: bool,
}

pub fn metrics_row(topology: &Topology) -> Result<MetricsRow, Error> {
    let size = topology.size();
    let metrics = all_pairs_metrics(topology)?;
    let diameter_formula = ParamFamily::of(topology.family())
        .and_then(|f| params_for(f, size).ok())
        .and_then(|p| p.diameter);
    let routing = router_for(RoutingKind::native(topology.family()), topology)?;
    let cdg = build_cdg(topology, &routing)?;
    Ok(MetricsRow {
        family: topology.family(),
        m: size.rows,
        n: size.cols,
        nodes: topology.node_count(),
        links: topology.link_count(),
        diameter_formula,
        diameter_measured: metrics.diameter,
        avg_hops: metrics.avg_hops(),
        deadlock_free: is_deadlock_free(&cdg),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub family: Family,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub ip_count: u32,
    pub injection: f64,
    pub seed: u64,
    pub avg_latency: f64,
    pub p99_latency: u64,
    pub throughput: f64,
    pub total_transfer_time: u64,
}

pub fn sim_row(topology: &Topology, config: &SimConfig, stats: &SimStats) -> SimRow {
    SimRow {
        family: topology.family(),
        m: topology.size().rows,
        n: topology.size().cols,
        ip_count: topology.ip_count(),
        injection: config.injection,
        seed: config.seed,
        avg_latency: stats.avg_latency,
        p99_latency: stats.p99_latency,
        throughput: stats.throughput,
        total_transfer_time: stats.total_transfer_time,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonCsvRow {
    pub ip_blocks: u32,
    pub t_d2dmot: u64,
    pub t_mot: u64,
    pub t_mesh: u64,
    pub speedup_pct: f64,
}

pub fn comparison_rows(rows: &[ComparisonRow]) -> Vec<ComparisonCsvRow> {
    rows.iter()
        .map(|r| ComparisonCsvRow {
            ip_blocks: r.ip_blocks,
            t_d2dmot: r.t_d2dmot,
            t_mot: r.t_mot,
            t_mesh: r.t_mesh,
            speedup_pct: r.speedup_pct,
        })
        .collect()
}

/// Comma-separated with a header row.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String, IoError> {
    Ok(serde_json::to_string_pretty(value)?)
}
