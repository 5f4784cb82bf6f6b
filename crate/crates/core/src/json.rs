//! Graph JSON format.
//!
//! ```text
//! {"n": 3, "edges": [[0, 1], [1, 2, 2.5]], "boundary": [0, 2]}
//! ```
//!
//! An edge is `[i, j]` (weight 1) or `[i, j, w]` with `w > 0`. Each edge is
//! listed once; loops, duplicates and ids `≥ n` are rejected.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphWithBoundary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeEntry {
    Unit(usize, usize),
    Weighted(usize, usize, f64),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<EdgeEntry>,
    boundary: Vec<usize>,
}

impl GraphWithBoundary {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(file.edges.len());
        for entry in file.edges {
            let (i, j, w) = match entry {
                EdgeEntry::Unit(i, j) => (i, j, 1.0),
                EdgeEntry::Weighted(i, j, w) => (i, j, w),
            };
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::BadWeight(w));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::DuplicateEdge(i.min(j), i.max(j)));
            }
            edges.push((i, j, w));
        }
        Self::new(file.n, edges, file.boundary)
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            n: self.n(),
            edges: self
                .edges()
                .iter()
                .map(|e| {
                    if e.weight == 1.0 {
                        EdgeEntry::Unit(e.u, e.v)
                    } else {
                        EdgeEntry::Weighted(e.u, e.v, e.weight)
                    }
                })
                .collect(),
            boundary: self.boundary().to_vec(),
        };
        serde_json::to_string(&file).expect("graph serializes")
    }
}
