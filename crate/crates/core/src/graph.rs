//! Finite graphs with boundary.
//!
//! A graph with boundary is a connected graph `(V, E)` together with a set
//! `B ⊂ V` of boundary vertices such that no edge joins two boundary
//! vertices and every boundary vertex has at least one interior neighbour.
//! Vertices are dense ids `0..n`; edges carry a positive weight (1 for the
//! unweighted setting).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected weighted edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A violated structural axiom, reported by [`GraphWithBoundary::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyBoundary,
    EdgeInsideBoundary { u: usize, v: usize },
    NoInteriorNeighbor { vertex: usize },
    NotConnected { unreachable: Vec<usize> },
    NonPositiveWeight { u: usize, v: usize, weight: f64 },
}

impl Violation {
    /// Short name of the violated invariant.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::EmptyBoundary => "b ≥ 1",
            Violation::EdgeInsideBoundary { .. } => "E(B,B) ≠ ∅",
            Violation::NoInteriorNeighbor { .. } => "δ(B^c) ≠ B",
            Violation::NotConnected { .. } => "not connected",
            Violation::NonPositiveWeight { .. } => "non-positive weight",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyBoundary => write!(f, "{}: boundary is empty", self.name()),
            Violation::EdgeInsideBoundary { u, v } => {
                write!(
                    f,
                    "{}: edge {{{u},{v}}} joins two boundary vertices",
                    self.name()
                )
            }
            Violation::NoInteriorNeighbor { vertex } => write!(
                f,
                "{}: boundary vertex {vertex} has no interior neighbor",
                self.name()
            ),
            Violation::NotConnected { unreachable } => write!(
                f,
                "{}: vertices {unreachable:?} unreachable from vertex 0",
                self.name()
            ),
            Violation::NonPositiveWeight { u, v, weight } => {
                write!(f, "{}: edge {{{u},{v}}} has weight {weight}", self.name())
            }
        }
    }
}

/// Hop distances from one source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceTable {
    pub source: usize,
    pub dist: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphWithBoundary {
    n: usize,
    edges: Vec<Edge>,
    boundary: Vec<usize>,
    is_boundary: Vec<bool>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl GraphWithBoundary {
    /// Builds a graph from weighted edges and a boundary id list.
    ///
    /// Parallel edges are merged by summing their weights. Out-of-range ids,
    /// loops, repeated boundary ids and non-finite weights are rejected here;
    /// the graph-with-boundary axioms are checked separately by
    /// [`validate`](Self::validate).
    pub fn new<E, B>(n: usize, edges: E, boundary: B) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize, f64)>,
        B: IntoIterator<Item = usize>,
    {
        let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, w) in edges {
            for vertex in [i, j] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if i == j {
                return Err(Error::Loop(i));
            }
            if !w.is_finite() {
                return Err(Error::BadWeight(w));
            }
            *merged.entry((i.min(j), i.max(j))).or_insert(0.0) += w;
        }

        let mut is_boundary = vec![false; n];
        let mut boundary: Vec<usize> = boundary.into_iter().collect();
        for &vertex in &boundary {
            if vertex >= n {
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if is_boundary[vertex] {
                return Err(Error::DuplicateBoundary(vertex));
            }
            is_boundary[vertex] = true;
        }
        boundary.sort_unstable();

        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(j, _)| j);
        }

        Ok(Self {
            n,
            edges,
            boundary,
            is_boundary,
            adj,
        })
    }

    /// Unit-weight graph.
    pub fn unweighted(n: usize, edges: &[(usize, usize)], boundary: &[usize]) -> Result<Self> {
        Self::new(
            n,
            edges.iter().map(|&(i, j)| (i, j, 1.0)),
            boundary.iter().copied(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted boundary ids.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Number of boundary vertices `b`.
    pub fn b(&self) -> usize {
        self.boundary.len()
    }

    /// Sorted interior ids.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| !self.is_boundary[v]).collect()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    /// Neighbours of `v` with edge weights, sorted by id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Number of incident edges.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Weighted degree `m_v`, the sum of incident edge weights.
    pub fn measure(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum()
    }

    /// Smallest edge weight, `None` for an edgeless graph.
    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::min)
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Checks every graph-with-boundary axiom and returns all violations.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if self.boundary.is_empty() {
            violations.push(Violation::EmptyBoundary);
        }
        for e in &self.edges {
            if self.is_boundary[e.u] && self.is_boundary[e.v] {
                violations.push(Violation::EdgeInsideBoundary { u: e.u, v: e.v });
            }
        }
        for &v in &self.boundary {
            if !self.adj[v].iter().any(|&(j, _)| !self.is_boundary[j]) {
                violations.push(Violation::NoInteriorNeighbor { vertex: v });
            }
        }
        if self.n > 0 {
            let reach = self.bfs(0);
            let unreachable: Vec<usize> = (0..self.n).filter(|&v| reach[v].is_none()).collect();
            if !unreachable.is_empty() {
                violations.push(Violation::NotConnected { unreachable });
            }
        }
        for e in &self.edges {
            if e.weight <= 0.0 {
                violations.push(Violation::NonPositiveWeight {
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// [`validate`](Self::validate) as a `Result` with the crate error type.
    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(Error::Invalid)
    }

    pub(crate) fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(i) = queue.pop_front() {
            let d = dist[i].unwrap_or_default() + 1;
            for &(j, _) in &self.adj[i] {
                if dist[j].is_none() {
                    dist[j] = Some(d);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Hop distances from `source`. Weights are ignored.
    pub fn bfs_distances(&self, source: usize) -> Result<DistanceTable> {
        if source >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: source,
                n: self.n,
            });
        }
        let dist = self
            .bfs(source)
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Disconnected)?;
        Ok(DistanceTable { source, dist })
    }

    /// Extrinsic diameter of the boundary: the largest hop distance between
    /// two boundary vertices, measured through the whole graph.
    pub fn boundary_diameter(&self) -> Result<usize> {
        if self.b() < 2 {
            return Err(Error::BoundaryTooSmall(self.b()));
        }
        let mut best = 0;
        for &s in &self.boundary[..self.b() - 1] {
            let dist = self.bfs(s);
            for &t in &self.boundary {
                best = best.max(dist[t].ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// Largest hop distance between any two vertices.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs(s) {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// `Vol(B) = Σ_{i∈B} m_i`.
    pub fn boundary_volume(&self) -> f64 {
        self.boundary.iter().map(|&v| self.measure(v)).sum()
    }
}
