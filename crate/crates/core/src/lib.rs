//! Network-on-chip topology toolkit: builders for mesh, torus, binary-tree,
//! mesh-of-trees and their diametrically augmented variants, graph metrics,
//! deterministic routing with validators, and a flit-level simulator.

pub mod analysis;
pub mod io;
pub mod routing;
pub mod sim;
pub mod topology;

use thiserror::Error;

/// Any error the library can return.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Topology(#[from] topology::TopologyError),
    #[error(transparent)]
    Routing(#[from] routing::RoutingError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Sim(#[from] sim::SimError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Topology(e) => e.code(),
            Error::Routing(e) => e.code(),
            Error::Analysis(e) => e.code(),
            Error::Sim(e) => e.code(),
            Error::Io(e) => e.code(),
        }
    }
}
