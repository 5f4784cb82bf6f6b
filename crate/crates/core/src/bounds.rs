//! Lower bounds for the first non-zero Steklov eigenvalue.
//!
//! With `b = |B|` and `d_B` the boundary diameter:
//!
//! ```text
//! σ_1 ≥ b / ((b−1)²·d_B)                      (unit normalization)
//! σ_1 ≥ b / (⌊b/2⌋·⌈b/2⌉·d_B)                 (unit normalization)
//! σ_1 ≥ min μ / (d_B·Vol(B))                  (measure normalization)
//! ```
//!
//! The second bound rests on the minimum spread of a unit, zero-mean,
//! sorted vector: `min {x_1 − x_b : x ∈ D_b ∩ S_b} = √b / √(⌊b/2⌋⌈b/2⌉)`.
//! [`SpreadProblem`] carries that closed form together with the two-level
//! candidate vectors and a sampling oracle that does not use it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphWithBoundary;
use crate::steklov::{steklov_spectrum, Normalization};

/// Absolute slack below a bound that is reported as a violation.
pub const VIOLATION_TOL: f64 = 1e-8;

fn check_b(b: usize) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidParameter(format!("need b ≥ 2, got {b}")));
    }
    Ok(())
}

fn check_args(b: usize, d_b: usize) -> Result<()> {
    check_b(b)?;
    if d_b < 1 {
        return Err(Error::InvalidParameter("need d_B ≥ 1, got 0".into()));
    }
    Ok(())
}

/// `⌊b/2⌋·⌈b/2⌉`.
pub fn half_product(b: usize) -> usize {
    (b / 2) * b.div_ceil(2)
}

/// `b / ((b−1)²·d_B)`.
pub fn thm1_bound(b: usize, d_b: usize) -> Result<f64> {
    check_args(b, d_b)?;
    let bm1 = (b - 1) as f64;
    Ok(b as f64 / (bm1 * bm1 * d_b as f64))
}

/// `b / (⌊b/2⌋·⌈b/2⌉·d_B)`.
pub fn thm2_bound(b: usize, d_b: usize) -> Result<f64> {
    check_args(b, d_b)?;
    Ok(b as f64 / (half_product(b) as f64 * d_b as f64))
}

/// `c / (d_B·Vol(B))` with `c` the smallest edge weight.
pub fn weighted_bound(g: &GraphWithBoundary) -> Result<f64> {
    let d_b = g.boundary_diameter()?;
    let c = g.min_weight().ok_or(Error::Disconnected)?;
    Ok(c / (d_b as f64 * g.boundary_volume()))
}

/// `√b / (√⌊b/2⌋·√⌈b/2⌉)`.
pub fn prop1_min_closed(b: usize) -> Result<f64> {
    check_b(b)?;
    Ok((b as f64).sqrt() / ((b / 2) as f64).sqrt() / (b.div_ceil(2) as f64).sqrt())
}

/// A two-level vector `y^k`: `b − k` equal positive entries followed by `k`
/// equal negative entries, summing to 0 with unit norm.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadCandidate {
    pub k: usize,
    pub y: Vec<f64>,
    pub value: f64,
}

/// The candidates `y^1 … y^{b−1}` with their spreads `f_b(y^k)`.
pub fn spread_candidates(b: usize) -> Result<Vec<SpreadCandidate>> {
    check_b(b)?;
    let bf = (b as f64).sqrt();
    Ok((1..b)
        .map(|k| {
            let (kf, rest) = (k as f64, (b - k) as f64);
            let high = kf * rest.sqrt() / (rest * bf * kf.sqrt());
            let low = -rest.sqrt() / (bf * kf.sqrt());
            let mut y = vec![high; b - k];
            y.extend(std::iter::repeat_n(low, k));
            SpreadCandidate {
                k,
                value: y[0] - y[b - 1],
                y,
            }
        })
        .collect())
}

/// Centres, normalizes and sorts `x` non-increasingly. Returns `false` when
/// the centred vector is (numerically) zero.
fn project(x: &mut [f64]) -> bool {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= norm);
    x.sort_by(|a, b| b.total_cmp(a));
    true
}

/// Spread of `x + h(e_i − e_j)` after renormalization, for a unit,
/// zero-sum `x`. The sum is unchanged by the move.
fn moved_spread(x: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let norm = (1.0 + 2.0 * h * (x[i] - x[j]) + 2.0 * h * h).sqrt();
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (t, &v) in x.iter().enumerate() {
        let v = if t == i {
            v + h
        } else if t == j {
            v - h
        } else {
            v
        };
        hi = hi.max(v);
        lo = lo.min(v);
    }
    (hi - lo) / norm
}

const STEP_START: f64 = 0.1;
const STEP_MIN: f64 = 1e-7;

/// Pairwise-perturbation descent on the spread, staying in `D_b ∩ S_b`.
/// Each iteration either accepts one improving move or halves the step.
fn descend(x: &mut [f64], iters: usize) -> f64 {
    let b = x.len();
    let mut f = x[0] - x[b - 1];
    let mut h = STEP_START;
    for _ in 0..iters {
        if h < STEP_MIN {
            break;
        }
        let mut accepted = false;
        'pairs: for i in 0..b {
            for j in 0..b {
                if i == j || moved_spread(x, i, j, h) >= f {
                    continue;
                }
                x[i] += h;
                x[j] -= h;
                project(x);
                f = x[0] - x[b - 1];
                accepted = true;
                break 'pairs;
            }
        }
        if !accepted {
            h *= 0.5;
        }
    }
    f
}

/// Sampling estimate of `min f_b` over `D_b ∩ S_b`.
///
/// Draws `samples` uniform points of `[−1, 1]^b`, projects each onto the
/// feasible set and runs up to `iters` descent iterations from it. Returns
/// the best spread and its point. Every evaluated point is feasible, so the
/// result never undershoots the true minimum beyond rounding.
pub fn prop1_oracle(b: usize, samples: usize, iters: usize, seed: u64) -> Result<(f64, Vec<f64>)> {
    check_b(b)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::INFINITY, Vec::new());
    let mut drawn = 0;
    while drawn < samples {
        let mut x: Vec<f64> = (0..b).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if !project(&mut x) {
            continue;
        }
        drawn += 1;
        let f = descend(&mut x, iters);
        if f < best.0 {
            best = (f, x);
        }
    }
    Ok(best)
}

/// The spread minimization instance for one `b`.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadProblem {
    pub b: usize,
    pub closed_form: f64,
    pub candidates: Vec<SpreadCandidate>,
    pub oracle_min: f64,
    pub oracle_argmin: Vec<f64>,
}

impl SpreadProblem {
    pub fn solve(b: usize, samples: usize, iters: usize, seed: u64) -> Result<Self> {
        let (oracle_min, oracle_argmin) = prop1_oracle(b, samples, iters, seed)?;
        Ok(Self {
            b,
            closed_form: prop1_min_closed(b)?,
            candidates: spread_candidates(b)?,
            oracle_min,
            oracle_argmin,
        })
    }

    /// Smallest candidate spread and its `k`.
    pub fn best_candidate(&self) -> &SpreadCandidate {
        self.candidates
            .iter()
            .min_by(|a, c| a.value.total_cmp(&c.value))
            .expect("b ≥ 2 gives at least one candidate")
    }
}

/// Exact `σ_1` of one graph next to every bound that applies to it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub normalization: Normalization,
    pub b: usize,
    pub d_b: usize,
    pub sigma1: f64,
    pub thm1: f64,
    pub thm2: f64,
    /// Present in measure normalization only.
    pub weighted: Option<f64>,
    /// `σ_1` minus the bound that applies: `thm2` in unit normalization,
    /// `weighted` in measure normalization.
    pub slack: f64,
    /// Bounds exceeded by more than [`VIOLATION_TOL`].
    pub violations: Vec<String>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Computes `σ_1` and compares it with the bounds valid for `norm`: the two
/// combinatorial bounds in unit normalization, the weighted bound in measure
/// normalization.
pub fn check_bounds(g: &GraphWithBoundary, norm: Normalization) -> Result<BoundReport> {
    g.ensure_valid()?;
    let b = g.b();
    let d_b = g.boundary_diameter()?;
    let spectrum = steklov_spectrum(g, norm)?;
    let sigma1 = spectrum.sigmas[1];
    let thm1 = thm1_bound(b, d_b)?;
    let thm2 = thm2_bound(b, d_b)?;
    let weighted = match norm {
        Normalization::Unit => None,
        Normalization::Measure => Some(weighted_bound(g)?),
    };

    let mut violations = Vec::new();
    let mut flag = |name: &str, bound: f64| {
        if sigma1 < bound - VIOLATION_TOL {
            violations.push(format!("{name}: sigma1 = {sigma1} < {bound}"));
        }
    };
    match (norm, weighted) {
        (Normalization::Measure, Some(w)) => flag("weighted", w),
        _ => {
            flag("thm1", thm1);
            flag("thm2", thm2);
        }
    }

    Ok(BoundReport {
        normalization: norm,
        b,
        d_b,
        sigma1,
        thm1,
        thm2,
        weighted,
        slack: sigma1 - weighted.unwrap_or(thm2),
        violations,
    })
}
