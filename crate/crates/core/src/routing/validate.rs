use rayon::prelude::*;
use serde::Serialize;

use super::{route_trace, Destination, RoutingFunction};
use crate::analysis::DistanceMatrix;
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchRow {
    pub src: NodeId,
    pub dst: NodeId,
    pub routed_len: u32,
    pub bfs_len: u32,
    pub stretch: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteFailure {
    pub src: NodeId,
    pub dst: NodeId,
    pub error: String,
}

/// Exhaustive trace of every ordered pair of distinct endpoint routers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchReport {
    pub rows: Vec<StretchRow>,
    pub failures: Vec<RouteFailure>,
}

impl StretchReport {
    pub fn pairs(&self) -> usize {
        self.rows.len() + self.failures.len()
    }

    pub fn delivery_rate(&self) -> f64 {
        if self.pairs() == 0 {
            1.0
        } else {
            self.rows.len() as f64 / self.pairs() as f64
        }
    }

    pub fn max_stretch(&self) -> f64 {
        self.rows.iter().map(|r| r.stretch).fold(1.0, f64::max)
    }

    pub fn mean_stretch(&self) -> f64 {
        if self.rows.is_empty() {
            1.0
        } else {
            self.rows.iter().map(|r| r.stretch).sum::<f64>() / self.rows.len() as f64
        }
    }

    pub fn max_routed_len(&self) -> u32 {
        self.rows.iter().map(|r| r.routed_len).max().unwrap_or(0)
    }

    /// Delivered pairs that took a longer-than-shortest route.
    pub fn non_minimal(&self) -> impl Iterator<Item = &StretchRow> {
        self.rows.iter().filter(|r| r.routed_len > r.bfs_len)
    }

    pub fn summary(&self, deadlock_free: Option<bool>) -> ValidationSummary {
        ValidationSummary {
            delivery_rate: self.delivery_rate(),
            max_stretch: self.max_stretch(),
            mean_stretch: self.mean_stretch(),
            deadlock_free,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub delivery_rate: f64,
    pub max_stretch: f64,
    pub mean_stretch: f64,
    pub deadlock_free: Option<bool>,
}

pub fn validate_routing<R: RoutingFunction + ?Sized>(routing: &R, topology: &Topology) -> StretchReport {
    let distances = DistanceMatrix::new(topology);
    let endpoints = topology.endpoints();
    let per_source: Vec<(Vec<StretchRow>, Vec<RouteFailure>)> = endpoints
        .par_iter()
        .map(|&src| {
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for &dst in &endpoints {
                if dst == src {
                    continue;
                }
                match route_trace(routing, topology, src, Destination::router(dst)) {
                    Ok(p) => {
                        let bfs_len = distances.get(src, dst).expect("connected topology");
                        rows.push(StretchRow {
                            src,
                            dst,
                            routed_len: p.distance,
                            bfs_len,
                            stretch: p.distance as f64 / bfs_len as f64,
                        });
                    }
                    Err(e) => failures.push(RouteFailure { src, dst, error: e.to_string() }),
                }
            }
            (rows, failures)
        })
        .collect();
    let mut report = StretchReport { rows: Vec::new(), failures: Vec::new() };
    for (rows, failures) in per_source {
        report.rows.extend(rows);
        report.failures.extend(failures);
    }
    report
}
