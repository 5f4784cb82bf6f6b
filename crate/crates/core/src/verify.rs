//! Reproduction suite: every closed-form value and bound check, run against
//! the numerical pipeline, reported as a list of named checks.
//!
//! All tolerances are expressed relative to a base tolerance of `1e-8`;
//! [`Tolerances::new`] rescales them together.

use std::fmt;

use serde::Serialize;

use crate::bounds::{
    half_product, prop1_min_closed, prop1_oracle, spread_candidates, thm1_bound, thm2_bound,
    weighted_bound,
};
use crate::error::Result;
use crate::families::{
    d_family, exhaustive_minimizer_search, h_family, h_family_sigma1, path_graph, random_ensemble,
};
use crate::graph::GraphWithBoundary;
use crate::steklov::{
    combinatorial_laplacian_spectrum, dtn_matrix, dtn_matrix_by_extension, harmonic_extension,
    steklov_spectrum, Normalization,
};

/// Default base tolerance.
pub const BASE_TOL: f64 = 1e-8;

/// Seeds and sizes of the random ensembles.
pub const ENSEMBLE_SIZE: usize = 500;
pub const ENSEMBLE_SEED: u64 = 20_180_901;
pub const WEIGHTED_ENSEMBLE_SEED: u64 = 20_180_902;

/// Oracle settings for the spread problem.
pub const ORACLE_SAMPLES: usize = 10_000;
pub const ORACLE_ITERS: usize = 200;
pub const ORACLE_SEED: u64 = 7;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

impl Tolerances {
    /// Tolerances with the base `1e-8` replaced by `base`.
    pub fn new(base: f64) -> Self {
        Self {
            scale: base / BASE_TOL,
        }
    }

    /// A nominal tolerance rescaled.
    pub fn of(&self, nominal: f64) -> f64 {
        nominal * self.scale
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: expected {}, got {}, tol {:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            self.got,
            self.tolerance
        )
    }
}

/// A check that passes when `error ≤ tolerance`.
fn error_check(
    name: impl Into<String>,
    expected: impl Into<String>,
    error: f64,
    tolerance: f64,
) -> Check {
    Check {
        name: name.into(),
        expected: expected.into(),
        got: format!("max error {error:e}"),
        tolerance,
        passed: error <= tolerance,
    }
}

fn flag_check(
    name: impl Into<String>,
    expected: impl Into<String>,
    got: String,
    passed: bool,
) -> Check {
    Check {
        name: name.into(),
        expected: expected.into(),
        got,
        tolerance: 0.0,
        passed,
    }
}

fn sigma1(g: &GraphWithBoundary, norm: Normalization) -> Result<f64> {
    Ok(steklov_spectrum(g, norm)?.sigmas[1])
}

fn max_error<I: IntoIterator<Item = Result<f64>>>(errors: I) -> Result<f64> {
    errors.into_iter().try_fold(0.0f64, |m, e| Ok(m.max(e?)))
}

/// `v` shifted to zero mean and scaled to unit norm.
pub fn centered_unit(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let centered: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
    centered.into_iter().map(|x| x / norm).collect()
}

fn path_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let err = max_error(
        (2..=50)
            .map(|n| Ok((sigma1(&path_graph(n)?, Normalization::Unit)? - 2.0 / n as f64).abs())),
    )?;
    let exact = (2..=50).all(|n| {
        let target = 2.0 / n as f64;
        thm1_bound(2, n).ok() == Some(target) && thm2_bound(2, n).ok() == Some(target)
    });
    Ok(vec![
        error_check("path sigma1 = 2/n, n = 2..50", "2/n", err, tol.of(1e-9)),
        flag_check(
            "path thm1 = thm2 = 2/n exactly",
            "true",
            exact.to_string(),
            exact,
        ),
    ])
}

fn d_family_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let graphs = (0..=50).map(d_family).collect::<Result<Vec<_>>>()?;
    let err = max_error(
        graphs
            .iter()
            .map(|g| Ok((sigma1(g, Normalization::Unit)? - 1.0).abs())),
    )?;
    let diameters = graphs
        .iter()
        .map(|g| g.diameter())
        .collect::<Result<Vec<_>>>()?;
    let linear = diameters
        .iter()
        .enumerate()
        .all(|(n, &d)| d == (n + 1).max(2));
    Ok(vec![
        error_check("D-family sigma1 = 1, n = 0..50", "1", err, tol.of(1e-9)),
        flag_check(
            "D-family diameter grows linearly",
            "diameter = max(2, n+1)",
            format!("{} .. {}", diameters[0], diameters[50]),
            linear,
        ),
    ])
}

fn h_family_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut err = 0.0f64;
    let mut rational = true;
    let mut count = 0;
    for b in 2..=10usize {
        for d in 3..=40usize {
            let s = sigma1(&h_family(b, d)?, Normalization::Unit)?;
            err = err.max((s - h_family_sigma1(b, d)?).abs());
            if b % 2 == 0 {
                // b/(P(d−2)+b) = 4/(b(d−2)+4) as fractions
                let lhs = b * (b * (d - 2) + 4);
                let rhs = 4 * (half_product(b) * (d - 2) + b);
                rational &= lhs == rhs;
            }
            count += 1;
        }
    }
    let g = h_family(6, 5)?;
    let spectrum = steklov_spectrum(&g, Normalization::Unit)?;
    let hub = 3.0 * 6f64.sqrt() / 22.0;
    let ext_err = (spectrum.extensions[1][6] - hub)
        .abs()
        .max((spectrum.extensions[1][9] + hub).abs());
    Ok(vec![
        error_check(
            format!("H-family sigma1 closed form ({count} graphs)"),
            "b/(⌊b/2⌋⌈b/2⌉(d_B−2)+b)",
            err,
            tol.of(1e-9),
        ),
        flag_check(
            "H-family even b: equals 4/(b(d_B−2)+4) as rationals",
            "true",
            rational.to_string(),
            rational,
        ),
        error_check(
            "(H^6)_5 hub values ±3√6/22",
            "0.3340…",
            ext_err,
            tol.of(1e-9),
        ),
    ])
}

fn asymptotic_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for b in 3..=8usize {
        let p = half_product(b) as f64;
        let limit = b as f64 / p;
        let mut worst_margin = f64::NEG_INFINITY;
        let mut gaps = Vec::new();
        for d in [10usize, 100, 1000] {
            let scaled = d as f64 * sigma1(&h_family(b, d)?, Normalization::Unit)?;
            let allowed = 2.0 * limit * limit * p / (b as f64 * d as f64);
            worst_margin = worst_margin.max((scaled - limit).abs() - allowed);
            gaps.push(format!("{:.3e}", (scaled - limit).abs()));
        }
        checks.push(Check {
            name: format!("d_B·sigma1 → {limit:.6} for b = {b}"),
            expected: "gap ≤ 2L²⌊b/2⌋⌈b/2⌉/(b·d_B)".into(),
            got: format!("gaps {}", gaps.join(", ")),
            tolerance: tol.of(0.0),
            passed: worst_margin <= tol.of(0.0),
        });
    }
    Ok(checks)
}

fn ensemble_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let graphs = random_ensemble(ENSEMBLE_SIZE, ENSEMBLE_SEED, false);
    let (mut thm2_margin, mut thm_order) = (f64::NEG_INFINITY, true);
    let (mut asym, mut min_eig, mut kernel, mut assembly) = (0.0f64, f64::INFINITY, 0.0f64, 0.0f64);
    let mut laplacian_gap = f64::NEG_INFINITY;
    let mut spread = f64::NEG_INFINITY;
    for g in &graphs {
        let b = g.b();
        let d_b = g.boundary_diameter()?;
        let spectrum = steklov_spectrum(g, Normalization::Unit)?;
        let t2 = thm2_bound(b, d_b)?;
        thm2_margin = thm2_margin.max(t2 - spectrum.sigmas[1]);
        thm_order &= t2 >= thm1_bound(b, d_b)? - 1e-15;

        let schur = dtn_matrix(g)?;
        let raw = dtn_matrix_by_extension(g)?;
        for i in 0..b {
            let row_sum: f64 = schur.row(i).iter().sum();
            kernel = kernel.max(row_sum.abs());
            for j in 0..b {
                asym = asym.max((raw[i][j] - raw[j][i]).abs());
                assembly = assembly.max((raw[i][j] - schur.get(i, j)).abs());
            }
        }
        min_eig = min_eig.min(spectrum.sigmas[0]);

        let lambdas = combinatorial_laplacian_spectrum(g)?;
        for k in 0..b {
            laplacian_gap = laplacian_gap.max(lambdas[k] - spectrum.sigmas[k]);
        }

        let v = centered_unit(&spectrum.boundary_eigvecs[1]);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max(prop1_min_closed(b)? - (hi - lo));
    }
    let n = graphs.len();
    Ok(vec![
        error_check(
            format!("sigma1 ≥ thm2 on {n} random graphs"),
            "thm2 − sigma1 ≤ tol",
            thm2_margin.max(0.0),
            tol.of(1e-8),
        ),
        flag_check(
            "thm2 ≥ thm1 on random graphs",
            "true",
            thm_order.to_string(),
            thm_order,
        ),
        error_check(
            "DtN (harmonic-extension assembly) asymmetry",
            "0",
            asym,
            tol.of(1e-10),
        ),
        error_check(
            "DtN PSD (−min eigenvalue)",
            "≥ 0",
            (-min_eig).max(0.0),
            tol.of(1e-8),
        ),
        error_check("DtN Λ·1 = 0", "0", kernel, tol.of(1e-8)),
        error_check(
            "DtN Schur vs harmonic-extension assembly",
            "0",
            assembly,
            tol.of(1e-8),
        ),
        error_check(
            "sigma_k ≥ lambda_k, k < b",
            "lambda_k − sigma_k ≤ tol",
            laplacian_gap.max(0.0),
            tol.of(1e-8),
        ),
        error_check(
            "sigma1 eigenfunction boundary spread ≥ √b/√(⌊b/2⌋⌈b/2⌉)",
            "closed − spread ≤ tol",
            spread.max(0.0),
            tol.of(1e-8),
        ),
    ])
}

fn weighted_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let graphs = random_ensemble(ENSEMBLE_SIZE, WEIGHTED_ENSEMBLE_SEED, true);
    let margin = max_error(
        graphs
            .iter()
            .map(|g| Ok(weighted_bound(g)? - sigma1(g, Normalization::Measure)?)),
    )?;
    Ok(vec![error_check(
        format!(
            "measure sigma1 ≥ c/(d_B·Vol(B)) on {} weighted graphs",
            graphs.len()
        ),
        "bound − sigma1 ≤ tol",
        margin.max(0.0),
        tol.of(1e-8),
    )])
}

fn spread_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut err = 0.0f64;
    for b in 2..=30 {
        let best = spread_candidates(b)?
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        err = err.max((best - prop1_min_closed(b)?).abs());
    }
    let mut checks = vec![error_check(
        "spread closed form = min over two-level candidates, b = 2..30",
        "√b/√(⌊b/2⌋⌈b/2⌉)",
        err,
        tol.of(1e-12),
    )];
    for b in 2..=10 {
        let closed = prop1_min_closed(b)?;
        let (found, _) = prop1_oracle(b, ORACLE_SAMPLES, ORACLE_ITERS, ORACLE_SEED)?;
        let (below, above) = (tol.of(1e-9), tol.of(1e-3));
        checks.push(Check {
            name: format!("spread oracle b = {b}"),
            expected: format!("{closed:.9} in [−{below:e}, +{above:e}]"),
            got: format!("{found:.9}"),
            tolerance: above,
            passed: found >= closed - below && found <= closed + above,
        });
    }
    Ok(checks)
}

fn search_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for d_b in [2usize, 3] {
        let report = exhaustive_minimizer_search(2, d_b, 6)?;
        let target = 2.0 / d_b as f64;
        let min = report.min_sigma1.unwrap_or(f64::NAN);
        let passed = (min - target).abs() <= tol.of(1e-9)
            && report.reference_is_minimizer == Some(true)
            && (d_b != 2 || report.minimizers.len() >= 2);
        checks.push(Check {
            name: format!("exhaustive search b = 2, d_B = {d_b}, ≤ 6 vertices"),
            expected: format!("min {target:.9}, path among minimizers"),
            got: format!(
                "min {min:.9}, {} minimizers, path minimizer: {:?}",
                report.minimizers.len(),
                report.reference_is_minimizer
            ),
            tolerance: tol.of(1e-9),
            passed,
        });
    }
    Ok(checks)
}

fn example_checks(tol: &Tolerances) -> Result<Vec<Check>> {
    let cases: [(&str, GraphWithBoundary, f64); 4] = [
        ("P_10 sigma1", path_graph(10)?, 0.2),
        ("(H^6)_5 sigma1", h_family(6, 5)?, 2.0 / 11.0),
        ("(H^7)_5 sigma1", h_family(7, 5)?, 7.0 / 43.0),
        ("(H^7)_10 sigma1", h_family(7, 10)?, 7.0 / 103.0),
    ];
    let mut checks = Vec::new();
    for (name, g, expected) in cases {
        let got = sigma1(&g, Normalization::Unit)?;
        checks.push(error_check(
            name,
            format!("{expected:.12}"),
            (got - expected).abs(),
            tol.of(1e-9),
        ));
    }
    let p2 = path_graph(2)?;
    let ext = harmonic_extension(&p2, &[0.0, 1.0])?;
    checks.push(error_check(
        "P_2 harmonic extension of (0, 1)",
        "(0, 1/2, 1)",
        (ext[1] - 0.5).abs(),
        tol.of(1e-12),
    ));
    Ok(checks)
}

type CheckGroup = fn(&Tolerances) -> Result<Vec<Check>>;

/// Runs every check in a fixed order.
pub fn run_suite(tol: &Tolerances) -> Result<Vec<Check>> {
    let groups: [CheckGroup; 9] = [
        path_checks,
        d_family_checks,
        h_family_checks,
        asymptotic_checks,
        ensemble_checks,
        weighted_checks,
        spread_checks,
        search_checks,
        example_checks,
    ];
    let mut all = Vec::new();
    for group in groups {
        all.extend(group(tol)?);
    }
    Ok(all)
}
