//! Flit-level network simulator.
//!
//! Packets are split into flits that cross one link per `cycles_per_hop`.
//! Each channel carries one packet at a time and feeds a credit-limited
//! input buffer; competing requests are served oldest first, then by packet
//! id. Runs are sequential and fully determined by the seed.

mod compare;
mod config;
mod engine;
mod traffic;

use thiserror::Error;

use crate::routing::RoutingError;
use crate::topology::TopologyError;

pub use compare::{compare_families, mesh_side_for, speedup_pct, ComparisonRow};
pub use config::{SimConfig, Switching};
pub use engine::{simulate, simulate_workload, PacketRecord, SimOutcome, SimStats};
pub use traffic::{generate_workload, ip_cores, Injection, IpCore, TrafficPattern};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),
    #[error("saturated at cycle {cycle}: {backlog} packets waiting at sources")]
    SaturationAbort { cycle: u64, backlog: usize },
    #[error("deadlock at cycle {cycle}: {stuck_packets} packets cannot move")]
    Deadlock { cycle: u64, stuck_packets: usize },
    #[error("flit conservation violated: {0}")]
    Conservation(String),
    #[error("simulator invariant broken: {0}")]
    Internal(String),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

impl SimError {
    pub fn code(&self) -> &'static str {
        match self {
            SimError::ConfigInvalid(_) => "ConfigInvalid",
            SimError::SaturationAbort { .. } => "SaturationAbort",
            SimError::Deadlock { .. } => "Deadlock",
            SimError::Conservation(_) => "Conservation",
            SimError::Internal(_) => "Internal",
            SimError::Routing(e) => e.code(),
            SimError::Topology(e) => e.code(),
        }
    }
}
