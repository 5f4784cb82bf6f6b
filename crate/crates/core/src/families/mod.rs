//! Graph families with known Steklov spectra, and random graphs with
//! boundary for property testing.

mod search;

pub use search::{exhaustive_minimizer_search, SearchReport, MAX_SEARCH_VERTICES, SEARCH_BUDGET};

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::half_product;
use crate::error::{Error, Result};
use crate::graph::GraphWithBoundary;

/// Path with `n` edges, boundary at both ends.
pub fn path_graph(n: usize) -> Result<GraphWithBoundary> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "path length must be ≥ 2 (endpoints may not be adjacent), got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
    GraphWithBoundary::unweighted(n + 1, &edges, &[0, n])
}

/// The `D_{n+3}` graph: boundary vertices 0 and 1 share the hub 2, and a
/// pendant interior path `2 – 3 – … – n+2` hangs off the hub.
pub fn d_family(n: usize) -> Result<GraphWithBoundary> {
    let mut edges = vec![(0, 2), (1, 2)];
    edges.extend((2..n + 2).map(|i| (i, i + 1)));
    GraphWithBoundary::unweighted(n + 3, &edges, &[0, 1])
}

/// The `(H^b)_{d_B}` graph.
///
/// Labels: the `⌊b/2⌋` left leaves, then the `⌈b/2⌉` right leaves, then the
/// left hub, the inner vertices of the middle path, and the right hub. The
/// hubs are joined by a path of length `d_B − 2`.
pub fn h_family(b: usize, d_b: usize) -> Result<GraphWithBoundary> {
    check_h(b, d_b)?;
    let left = b / 2;
    let hub_l = b;
    let hub_r = b + d_b - 2;
    let mut edges: Vec<(usize, usize)> = (0..left).map(|i| (i, hub_l)).collect();
    edges.extend((left..b).map(|i| (i, hub_r)));
    edges.extend((hub_l..hub_r).map(|i| (i, i + 1)));
    let boundary: Vec<usize> = (0..b).collect();
    GraphWithBoundary::unweighted(hub_r + 1, &edges, &boundary)
}

fn check_h(b: usize, d_b: usize) -> Result<()> {
    if b < 2 || d_b < 3 {
        return Err(Error::InvalidParameter(format!(
            "H-family needs b ≥ 2 and d_B ≥ 3, got b = {b}, d_B = {d_b}"
        )));
    }
    Ok(())
}

/// `σ_1((H^b)_{d_B}) = b / (⌊b/2⌋⌈b/2⌉(d_B − 2) + b)`.
pub fn h_family_sigma1(b: usize, d_b: usize) -> Result<f64> {
    check_h(b, d_b)?;
    Ok(b as f64 / ((half_product(b) * (d_b - 2) + b) as f64))
}

/// Random connected graph with boundary.
///
/// The interior is a random recursive tree on `n_interior` vertices plus
/// every other interior pair with probability `p`. Each of the `b` boundary
/// vertices gets one uniform interior neighbour, then keeps adding distinct
/// ones with probability `p` each time. Boundary vertices come first in the
/// labelling. With `weighted`, weights are uniform in `[0.5, 2]`.
pub fn random_valid_graph(
    n_interior: usize,
    b: usize,
    p: f64,
    seed: u64,
    weighted: bool,
) -> Result<GraphWithBoundary> {
    if n_interior < 1 {
        return Err(Error::InvalidParameter(
            "need at least one interior vertex".into(),
        ));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must be in (0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for t in 1..n_interior {
        let parent = rng.random_range(0..t);
        edges.insert((b + parent, b + t));
    }
    for s in 0..n_interior {
        for t in s + 1..n_interior {
            if !edges.contains(&(b + s, b + t)) && rng.random_bool(p) {
                edges.insert((b + s, b + t));
            }
        }
    }
    for v in 0..b {
        let mut free: Vec<usize> = (b..b + n_interior).collect();
        loop {
            let pick = free.swap_remove(rng.random_range(0..free.len()));
            edges.insert((v, pick));
            if free.is_empty() || !rng.random_bool(p) {
                break;
            }
        }
    }
    let weighted_edges: Vec<(usize, usize, f64)> = edges
        .into_iter()
        .map(|(i, j)| {
            let w = if weighted {
                rng.random_range(0.5..=2.0)
            } else {
                1.0
            };
            (i, j, w)
        })
        .collect();
    GraphWithBoundary::new(n_interior + b, weighted_edges, 0..b)
}

/// Largest interior size drawn by [`random_ensemble`].
pub const ENSEMBLE_MAX_INTERIOR: usize = 40;
/// Largest boundary size drawn by [`random_ensemble`].
pub const ENSEMBLE_MAX_BOUNDARY: usize = 12;

/// `count` random graphs with `1..=40` interior vertices, `2..=12` boundary
/// vertices and edge probability in `[0.05, 0.5)`, fully determined by
/// `seed`.
pub fn random_ensemble(count: usize, seed: u64, weighted: bool) -> Vec<GraphWithBoundary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n_interior = rng.random_range(1..=ENSEMBLE_MAX_INTERIOR);
            let b = rng.random_range(2..=ENSEMBLE_MAX_BOUNDARY);
            let p = rng.random_range(0.05..0.5);
            let graph_seed = rng.random();
            random_valid_graph(n_interior, b, p, graph_seed, weighted)
                .expect("ensemble parameters are in range")
        })
        .collect()
}

/// A family member by name and parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Path {
        n: usize,
    },
    DFamily {
        n: usize,
    },
    HFamily {
        b: usize,
        d_b: usize,
    },
    Random {
        n_interior: usize,
        b: usize,
        p: f64,
        seed: u64,
        weighted: bool,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<GraphWithBoundary> {
        match *self {
            FamilySpec::Path { n } => path_graph(n),
            FamilySpec::DFamily { n } => d_family(n),
            FamilySpec::HFamily { b, d_b } => h_family(b, d_b),
            FamilySpec::Random {
                n_interior,
                b,
                p,
                seed,
                weighted,
            } => random_valid_graph(n_interior, b, p, seed, weighted),
        }
    }

    /// Closed-form `σ_1` (unit normalization) where one is known.
    pub fn closed_form_sigma1(&self) -> Option<f64> {
        match *self {
            FamilySpec::Path { n } if n >= 2 => Some(2.0 / n as f64),
            FamilySpec::DFamily { .. } => Some(1.0),
            FamilySpec::HFamily { b, d_b } => h_family_sigma1(b, d_b).ok(),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Path { .. } => "path",
            FamilySpec::DFamily { .. } => "d",
            FamilySpec::HFamily { .. } => "h",
            FamilySpec::Random { .. } => "random",
        }
    }
}
