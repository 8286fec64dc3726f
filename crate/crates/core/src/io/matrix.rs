use log::warn;

use super::IoError;
use crate::analysis::{bfs_shortest_path, AnalysisError, Digraph, PathResult};
use crate::topology::NodeId;

/// A directed graph read from a 0/1 matrix: entry `[i][j] = 1` is the channel `i -> j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    pub graph: Digraph,
    /// Every 1 entry, diagonal included.
    pub ones: usize,
    /// Rows whose diagonal entry was 1 and got dropped.
    pub self_loops: Vec<u32>,
}

impl AdjacencyMatrix {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Links as the matrix printout counts them: half the 1 entries.
    pub fn link_count(&self) -> usize {
        self.ones / 2
    }

    pub fn summary_lines(&self) -> String {
        format!("No of 1 in the Matrix = {}\nNo of link is = {}\n", self.ones, self.link_count())
    }

    pub fn shortest_path(&self, src: u32, dst: u32) -> Result<PathResult, AnalysisError> {
        bfs_shortest_path(&self.graph, NodeId(src), NodeId(dst))
    }
}

/// First non-blank line holds `n`, then `n` rows of `n` entries in {0, 1}.
pub fn parse_adjacency_matrix(text: &str) -> Result<AdjacencyMatrix, IoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let bad = |line: usize, reason: String| IoError::MalformedMatrix { line: line + 1, reason };
    let (first, header) = lines.next().ok_or_else(|| bad(0, "empty input".into()))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| bad(first, format!("expected a node count, found {:?}", header.trim())))?;
    let mut edges = Vec::new();
    let mut ones = 0;
    let mut self_loops = Vec::new();
    for row in 0..n {
        let (no, line) = lines
            .next()
            .ok_or_else(|| bad(first + row + 1, format!("expected {n} rows, found {row}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(bad(no, format!("expected {n} entries, found {}", entries.len())));
        }
        for (col, e) in entries.iter().enumerate() {
            match *e {
                "0" => {}
                "1" => {
                    ones += 1;
                    if row == col {
                        warn!("ignoring self-loop on node {row}");
                        self_loops.push(row as u32);
                    } else {
                        edges.push((row as u32, col as u32));
                    }
                }
                other => return Err(bad(no, format!("entry {other:?} is not 0 or 1"))),
            }
        }
    }
    if let Some((no, _)) = lines.next() {
        return Err(bad(no, format!("more than {n} rows")));
    }
    Ok(AdjacencyMatrix { graph: Digraph::from_edges(n, edges), ones, self_loops })
}

/// `Shortest path = a => b => c` and `Minimum distance = k`, newline-terminated.
pub fn shortest_path_lines(path: &PathResult) -> String {
    let nodes: Vec<String> = path.path.iter().map(|v| v.0.to_string()).collect();
    format!("Shortest path = {}\nMinimum distance = {}\n", nodes.join(" => "), path.distance)
}
