#![allow(dead_code)]

use proptest::prelude::*;
use steklov_core::families::random_valid_graph;
use steklov_core::GraphWithBoundary;

/// Random valid graph with at most 40 interior and 12 boundary vertices.
pub fn graph(weighted: bool) -> impl Strategy<Value = GraphWithBoundary> {
    (1usize..=40, 2usize..=12, 0.05f64..0.5, any::<u64>()).prop_map(move |(n, b, p, seed)| {
        random_valid_graph(n, b, p, seed, weighted).expect("parameters in range")
    })
}

pub fn any_graph() -> impl Strategy<Value = GraphWithBoundary> {
    any::<bool>().prop_flat_map(graph)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
