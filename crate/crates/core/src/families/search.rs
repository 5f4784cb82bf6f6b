//! Exhaustive search for `σ_1` minimizers among small graphs with boundary.
//!
//! Interior graphs are enumerated up to isomorphism; boundary attachments are
//! multisets of non-empty interior neighbourhoods, since boundary vertices
//! are interchangeable. Minimizers are reported once per isomorphism class,
//! where isomorphisms must map boundary to boundary.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{h_family, path_graph};
use crate::error::{Error, Result};
use crate::graph::GraphWithBoundary;
use crate::steklov::{steklov_spectrum, Normalization};

/// Hard cap on the vertex count.
pub const MAX_SEARCH_VERTICES: usize = 10;

/// Cap on the estimated number of labelled candidates.
pub const SEARCH_BUDGET: u64 = 20_000_000;

/// Two `σ_1` values closer than this count as equal.
const TIE_TOL: f64 = 1e-9;

/// Number of graphs on `k` vertices up to isomorphism (OEIS A000088).
const UNLABELED_GRAPHS: [u64; 11] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668, 12005168];

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub b: usize,
    pub d_b: usize,
    pub max_vertices: usize,
    /// Candidates whose boundary diameter matched and whose spectrum was
    /// computed.
    pub evaluated: u64,
    pub min_sigma1: Option<f64>,
    /// One graph per isomorphism class attaining the minimum, ordered by
    /// vertex count then canonical code.
    #[serde(skip)]
    pub minimizers: Vec<GraphWithBoundary>,
    /// `(H^b)_{d_B}`, or the path for `b = 2`, when defined and within the
    /// vertex budget.
    #[serde(skip)]
    pub reference: Option<GraphWithBoundary>,
    pub reference_is_minimizer: Option<bool>,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn estimated_candidates(b: usize, max_vertices: usize) -> u64 {
    (1..=max_vertices.saturating_sub(b))
        .map(|k| {
            let subsets = (1u64 << k) - 1;
            UNLABELED_GRAPHS[k].saturating_mul(binomial(subsets + b as u64 - 1, b as u64))
        })
        .fold(0u64, u64::saturating_add)
}

/// Canonical code of a graph given as adjacency bitsets, minimized over all
/// relabellings that keep vertices sorted by `color`. Isomorphic graphs with
/// matching colours get equal codes.
fn canonical_form(adj: &[u32], color: &[usize]) -> (Vec<usize>, u64, Vec<usize>) {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| color[v]);
    let colors: Vec<usize> = order.iter().map(|&v| color[v]).collect();
    let groups: Vec<Vec<usize>> = order
        .iter()
        .chunk_by(|&&v| color[v])
        .into_iter()
        .map(|(_, g)| g.copied().collect())
        .collect();

    let mut best_code = u64::MAX;
    let mut best_perm = order.clone();
    let mut pos = vec![0usize; n];
    for choice in groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()))
        .multi_cartesian_product()
    {
        let labelling: Vec<usize> = choice.concat();
        for (p, &v) in labelling.iter().enumerate() {
            pos[v] = p;
        }
        let mut code = 0u64;
        for u in 0..n {
            let mut rest = adj[u] & !((1u32 << (u + 1)) - 1);
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let (a, c) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
                code |= 1u64 << pair_index(a, c, n);
            }
        }
        if code < best_code {
            best_code = code;
            best_perm = labelling;
        }
    }
    (colors, best_code, best_perm)
}

/// Bit index of pair `a < c`, ordered so that earlier positions dominate.
fn pair_index(a: usize, c: usize, n: usize) -> usize {
    let total = n * (n - 1) / 2;
    total - 1 - (a * (2 * n - a - 1) / 2 + (c - a - 1))
}

fn degree_colors(adj: &[u32]) -> Vec<usize> {
    adj.iter().map(|a| a.count_ones() as usize).collect()
}

fn relabel(adj: &[u32], labelling: &[usize]) -> Vec<u32> {
    let mut pos = vec![0usize; adj.len()];
    for (p, &v) in labelling.iter().enumerate() {
        pos[v] = p;
    }
    let mut out = vec![0u32; adj.len()];
    for (u, &row) in adj.iter().enumerate() {
        let mut rest = row;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out[pos[u]] |= 1 << pos[v];
        }
    }
    out
}

/// All graphs on `k` vertices up to isomorphism, as adjacency bitsets.
fn unlabeled_graphs(k: usize) -> Vec<Vec<u32>> {
    let mut level: Vec<Vec<u32>> = vec![vec![]];
    for s in 0..k {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u32..(1 << s) {
                let mut adj = g.clone();
                adj.push(mask);
                for (v, row) in adj.iter_mut().enumerate().take(s) {
                    if mask >> v & 1 == 1 {
                        *row |= 1 << s;
                    }
                }
                let (colors, code, labelling) = canonical_form(&adj, &degree_colors(&adj));
                if seen.insert((colors, code)) {
                    next.push(relabel(&adj, &labelling));
                }
            }
        }
        level = next;
    }
    level
}

fn connected(adj: &[u32]) -> bool {
    let full = (1u32 << adj.len()) - 1;
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen == full
}

fn boundary_diameter(adj: &[u32], b: usize) -> usize {
    let mut best = 0;
    for s in 0..b {
        let boundary_mask = (1u32 << b) - 1;
        let mut seen = 1u32 << s;
        let mut frontier = seen;
        let mut d = 0;
        let mut last = 0;
        while frontier != 0 && seen & boundary_mask != boundary_mask {
            d += 1;
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            frontier = next & !seen;
            seen |= next;
            if frontier & boundary_mask != 0 {
                last = d;
            }
        }
        best = best.max(last);
    }
    best
}

fn to_graph(adj: &[u32], b: usize) -> GraphWithBoundary {
    let mut edges = Vec::new();
    for (u, &row) in adj.iter().enumerate() {
        for v in u + 1..adj.len() {
            if row >> v & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    let boundary: Vec<usize> = (0..b).collect();
    GraphWithBoundary::unweighted(adj.len(), &edges, &boundary)
        .expect("enumerated graph is well formed")
}

fn to_adjacency(g: &GraphWithBoundary) -> (Vec<u32>, Vec<usize>) {
    let adj = (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(0u32, |acc, &(j, _)| acc | 1 << j)
        })
        .collect::<Vec<u32>>();
    let colors = (0..g.n())
        .map(|v| usize::from(!g.is_boundary(v)) * 1000 + g.degree(v))
        .collect();
    (adj, colors)
}

type ClassKey = (usize, Vec<usize>, u64);

fn class_key(g: &GraphWithBoundary) -> ClassKey {
    let (adj, colors) = to_adjacency(g);
    let (colors, code, _) = canonical_form(&adj, &colors);
    (g.n(), colors, code)
}

/// Running minimum together with every graph within [`TIE_TOL`] of it.
#[derive(Default)]
struct Best {
    min: Option<f64>,
    graphs: Vec<(f64, Vec<u32>)>,
    evaluated: u64,
}

impl Best {
    fn offer(&mut self, sigma: f64, adj: &[u32]) {
        match self.min {
            Some(m) if sigma > m + TIE_TOL => {}
            Some(m) if sigma >= m => self.graphs.push((sigma, adj.to_vec())),
            _ => {
                self.min = Some(sigma);
                self.graphs.retain(|(s, _)| *s <= sigma + TIE_TOL);
                self.graphs.push((sigma, adj.to_vec()));
            }
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.evaluated += other.evaluated;
        for (s, adj) in other.graphs {
            self.offer(s, &adj);
        }
        self
    }
}

/// Enumerates every graph with boundary on at most `max_vertices` vertices
/// with exactly `b` boundary vertices and boundary diameter `d_b`, and
/// returns those of minimal `σ_1` (unit normalization).
pub fn exhaustive_minimizer_search(
    b: usize,
    d_b: usize,
    max_vertices: usize,
) -> Result<SearchReport> {
    if b < 2 {
        return Err(Error::InvalidParameter(format!("need b ≥ 2, got {b}")));
    }
    if max_vertices > MAX_SEARCH_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "max_vertices = {max_vertices} exceeds the limit of {MAX_SEARCH_VERTICES}"
        )));
    }
    let estimate = estimated_candidates(b, max_vertices);
    if estimate > SEARCH_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "about {estimate} candidate graphs for b = {b}, max_vertices = {max_vertices} (limit {SEARCH_BUDGET})"
        )));
    }

    let mut best = Best::default();
    // A boundary-to-boundary path has at most k interior vertices.
    for k in d_b.saturating_sub(1).max(1)..=max_vertices.saturating_sub(b) {
        let interiors = unlabeled_graphs(k);
        let masks: Vec<u32> = (1..1u32 << k).collect();
        let level = interiors
            .par_iter()
            .map(|inner| {
                let mut local = Best::default();
                let mut adj = vec![0u32; b + k];
                for attach in masks.iter().combinations_with_replacement(b) {
                    adj.iter_mut().for_each(|a| *a = 0);
                    for (v, row) in inner.iter().enumerate() {
                        adj[b + v] = row << b;
                    }
                    for (s, &&mask) in attach.iter().enumerate() {
                        adj[s] = mask << b;
                        let mut m = mask;
                        while m != 0 {
                            let v = m.trailing_zeros() as usize;
                            m &= m - 1;
                            adj[b + v] |= 1 << s;
                        }
                    }
                    if !connected(&adj) || boundary_diameter(&adj, b) != d_b {
                        continue;
                    }
                    local.evaluated += 1;
                    let g = to_graph(&adj, b);
                    if let Ok(s) = steklov_spectrum(&g, Normalization::Unit) {
                        local.offer(s.sigmas[1], &adj);
                    }
                }
                local
            })
            .reduce(Best::default, Best::merge);
        best = best.merge(level);
    }

    let mut classes: BTreeMap<ClassKey, GraphWithBoundary> = BTreeMap::new();
    if let Some(min) = best.min {
        for (s, adj) in &best.graphs {
            if *s <= min + TIE_TOL {
                let g = to_graph(adj, b);
                classes.entry(class_key(&g)).or_insert(g);
            }
        }
    }

    let reference = if b == 2 && d_b >= 2 {
        path_graph(d_b).ok()
    } else {
        h_family(b, d_b).ok()
    }
    .filter(|g| g.n() <= max_vertices);
    let reference_is_minimizer = reference
        .as_ref()
        .map(|g| classes.contains_key(&class_key(g)));

    Ok(SearchReport {
        b,
        d_b,
        max_vertices,
        evaluated: best.evaluated,
        min_sigma1: best.min,
        minimizers: classes.into_values().collect(),
        reference,
        reference_is_minimizer,
    })
}
