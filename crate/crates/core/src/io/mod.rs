//! File formats: adjacency-matrix ingestion and CSV/JSON reports.

mod matrix;
mod report;

use thiserror::Error;

pub use matrix::{parse_adjacency_matrix, shortest_path_lines, AdjacencyMatrix};
pub use report::{
    comparison_rows, metrics_row, sim_row, to_json_pretty, write_csv, ComparisonCsvRow, MetricsRow, SimRow,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed matrix at line {line}: {reason}")]
    MalformedMatrix { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl IoError {
    pub fn code(&self) -> &'static str {
        match self {
            IoError::MalformedMatrix { .. } => "MalformedMatrix",
            IoError::Io(_) => "Io",
            IoError::Csv(_) => "Csv",
            IoError::Json(_) => "Json",
        }
    }
}
