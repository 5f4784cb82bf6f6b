//! Laplacian, harmonic extension, Dirichlet-to-Neumann map and the Steklov
//! spectrum.
//!
//! The DtN matrix is the Schur complement of the Laplacian onto the boundary
//! block, `Λ = Δ_BB − Δ_BI·[Δ]_I⁻¹·Δ_IB`. Two boundary normalizations are
//! supported: [`Normalization::Unit`] uses `Σ_{i∈B} v_i²` in the Rayleigh
//! quotient, [`Normalization::Measure`] uses `Σ_{i∈B} m_i·v_i²` where `m_i` is
//! the weighted degree. The measure problem is reduced to a standard one by
//! the congruence `D^{-1/2}·Λ·D^{-1/2}`, `D = diag(m_i)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphWithBoundary;
use crate::linalg::{eigen_symmetric, orient, Cholesky, DenseSymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    #[default]
    Unit,
    Measure,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Unit => "unit",
            Normalization::Measure => "measure",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unit" => Ok(Normalization::Unit),
            "measure" => Ok(Normalization::Measure),
            other => Err(Error::InvalidParameter(format!(
                "unknown normalization {other:?} (expected unit or measure)"
            ))),
        }
    }
}

impl Normalization {
    /// Boundary weights of the inner product: all ones, or `m_i`.
    pub fn boundary_weights(self, g: &GraphWithBoundary) -> Vec<f64> {
        g.boundary()
            .iter()
            .map(|&v| match self {
                Normalization::Unit => 1.0,
                Normalization::Measure => g.measure(v),
            })
            .collect()
    }
}

/// Steklov eigenvalues with boundary eigenvectors and harmonic extensions.
#[derive(Debug, Clone, Serialize)]
pub struct SteklovSpectrum {
    pub normalization: Normalization,
    pub boundary: Vec<usize>,
    /// `σ_0 ≤ σ_1 ≤ … ≤ σ_{b−1}`, unclamped.
    pub sigmas: Vec<f64>,
    /// Boundary eigenvectors, orthonormal for the normalization's inner
    /// product. Entry `k` is indexed like `boundary`.
    pub boundary_eigvecs: Vec<Vec<f64>>,
    /// Harmonic extensions of the boundary eigenvectors, indexed by vertex.
    pub extensions: Vec<Vec<f64>>,
}

impl SteklovSpectrum {
    pub fn b(&self) -> usize {
        self.sigmas.len()
    }

    /// `σ_1`, clamped to 0 from below. `None` when `b < 2`.
    pub fn sigma1(&self) -> Option<f64> {
        self.sigmas.get(1).map(|&s| s.max(0.0))
    }
}

/// Weighted Laplacian: `m_i` on the diagonal, `−μ_ij` off it.
pub fn laplacian(g: &GraphWithBoundary) -> DenseSymMatrix {
    let mut l = DenseSymMatrix::zeros(g.n());
    for e in g.edges() {
        l.set(e.u, e.v, -e.weight);
    }
    for v in 0..g.n() {
        l.set(v, v, g.measure(v));
    }
    l
}

/// Eigenvalues of the full graph Laplacian, ascending.
pub fn combinatorial_laplacian_spectrum(g: &GraphWithBoundary) -> Result<Vec<f64>> {
    Ok(eigen_symmetric(&laplacian(g))?.values)
}

/// Factorized interior block of the Laplacian plus index bookkeeping, shared
/// by harmonic extension and DtN assembly.
#[derive(Debug, Clone)]
pub struct InteriorSolver {
    interior: Vec<usize>,
    /// Position of each vertex inside `interior` or `boundary`.
    slot: Vec<usize>,
    chol: Cholesky,
}

impl InteriorSolver {
    /// Fails with the validation error when `g` is not a valid graph with
    /// boundary.
    pub fn new(g: &GraphWithBoundary) -> Result<Self> {
        g.ensure_valid()?;
        let interior = g.interior();
        let mut slot = vec![0; g.n()];
        for (k, &v) in interior.iter().enumerate() {
            slot[v] = k;
        }
        for (k, &v) in g.boundary().iter().enumerate() {
            slot[v] = k;
        }
        let mut minor = DenseSymMatrix::zeros(interior.len());
        for (a, &i) in interior.iter().enumerate() {
            minor.set(a, a, g.measure(i));
            for &(j, w) in g.neighbors(i) {
                if !g.is_boundary(j) {
                    minor.set(a, slot[j], -w);
                }
            }
        }
        let chol = Cholesky::factor(&minor)?;
        Ok(Self {
            interior,
            slot,
            chol,
        })
    }

    /// Harmonic extension of `phi` (indexed like `g.boundary()`).
    pub fn extend(&self, g: &GraphWithBoundary, phi: &[f64]) -> Result<Vec<f64>> {
        if phi.len() != g.b() {
            return Err(Error::DimensionMismatch {
                expected: g.b(),
                got: phi.len(),
            });
        }
        let rhs: Vec<f64> = self
            .interior
            .iter()
            .map(|&i| {
                g.neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| g.is_boundary(j))
                    .map(|&(j, w)| w * phi[self.slot[j]])
                    .sum()
            })
            .collect();
        let inner = self.chol.solve(&rhs)?;
        let mut out = vec![0.0; g.n()];
        for (k, &v) in g.boundary().iter().enumerate() {
            out[v] = phi[k];
        }
        for (k, &v) in self.interior.iter().enumerate() {
            out[v] = inner[k];
        }
        Ok(out)
    }
}

/// Unique function equal to `phi` on the boundary and harmonic on the
/// interior.
pub fn harmonic_extension(g: &GraphWithBoundary, phi: &[f64]) -> Result<Vec<f64>> {
    InteriorSolver::new(g)?.extend(g, phi)
}

/// `(∂v/∂n)_i = Σ_{j∈I, j∼i} μ_ij (v_i − v_j)` for each boundary vertex `i`.
pub fn normal_derivative(g: &GraphWithBoundary, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: v.len(),
        });
    }
    Ok(g.boundary()
        .iter()
        .map(|&i| {
            g.neighbors(i)
                .iter()
                .filter(|&&(j, _)| !g.is_boundary(j))
                .map(|&(j, w)| w * (v[i] - v[j]))
                .sum()
        })
        .collect())
}

/// DtN matrix as the Schur complement of the Laplacian onto the boundary.
pub fn dtn_matrix(g: &GraphWithBoundary) -> Result<DenseSymMatrix> {
    let b = g.b();
    if b == 0 {
        return Err(Error::EmptyBoundary);
    }
    let solver = InteriorSolver::new(g)?;
    let ni = solver.interior.len();

    // Column k of −Δ_IB: weights from interior vertices to boundary vertex k.
    let mut coupling = vec![vec![0.0; ni]; b];
    for (k, &v) in g.boundary().iter().enumerate() {
        for &(j, w) in g.neighbors(v) {
            if !g.is_boundary(j) {
                coupling[k][solver.slot[j]] += w;
            }
        }
    }
    let solved = coupling
        .iter()
        .map(|col| solver.chol.solve(col))
        .collect::<Result<Vec<_>>>()?;

    let mut data = vec![0.0; b * b];
    for (k, &v) in g.boundary().iter().enumerate() {
        for l in 0..b {
            let dot: f64 = coupling[k].iter().zip(&solved[l]).map(|(x, y)| x * y).sum();
            data[k * b + l] = -dot;
        }
        data[k * b + k] += g.measure(v);
    }
    DenseSymMatrix::from_row_major(b, data)
}

/// DtN matrix assembled column by column as `∂(ẽ_k)/∂n`. Returned as raw
/// rows, without symmetrization, so it can serve as an independent check on
/// [`dtn_matrix`].
pub fn dtn_matrix_by_extension(g: &GraphWithBoundary) -> Result<Vec<Vec<f64>>> {
    let b = g.b();
    if b == 0 {
        return Err(Error::EmptyBoundary);
    }
    let solver = InteriorSolver::new(g)?;
    let mut rows = vec![vec![0.0; b]; b];
    for k in 0..b {
        let mut e = vec![0.0; b];
        e[k] = 1.0;
        let ext = solver.extend(g, &e)?;
        for (i, d) in normal_derivative(g, &ext)?.into_iter().enumerate() {
            rows[i][k] = d;
        }
    }
    Ok(rows)
}

/// Full Steklov spectrum under the given normalization.
pub fn steklov_spectrum(g: &GraphWithBoundary, norm: Normalization) -> Result<SteklovSpectrum> {
    if g.b() == 0 {
        return Err(Error::EmptyBoundary);
    }
    let lambda = dtn_matrix(g)?;
    let weights = norm.boundary_weights(g);
    let (sigmas, boundary_eigvecs) = match norm {
        Normalization::Unit => {
            let eig = eigen_symmetric(&lambda)?;
            (eig.values, eig.vectors)
        }
        Normalization::Measure => {
            let inv_sqrt: Vec<f64> = weights.iter().map(|m| 1.0 / m.sqrt()).collect();
            let eig = eigen_symmetric(&lambda.congruence_diag(&inv_sqrt))?;
            let vecs = eig
                .vectors
                .into_iter()
                .map(|y| {
                    let mut v: Vec<f64> = y.iter().zip(&inv_sqrt).map(|(a, s)| a * s).collect();
                    orient(&mut v);
                    v
                })
                .collect();
            (eig.values, vecs)
        }
    };
    let solver = InteriorSolver::new(g)?;
    let extensions = boundary_eigvecs
        .iter()
        .map(|phi| solver.extend(g, phi))
        .collect::<Result<Vec<_>>>()?;
    Ok(SteklovSpectrum {
        normalization: norm,
        boundary: g.boundary().to_vec(),
        sigmas,
        boundary_eigvecs,
        extensions,
    })
}

/// Dirichlet energy `Σ_{i∼j} μ_ij (v_i − v_j)²`.
pub fn energy(g: &GraphWithBoundary, v: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| e.weight * (v[e.u] - v[e.v]).powi(2))
        .sum()
}

/// Energy of `v` over its boundary norm under `norm`.
pub fn rayleigh_quotient(g: &GraphWithBoundary, v: &[f64], norm: Normalization) -> Result<f64> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: v.len(),
        });
    }
    let weights = norm.boundary_weights(g);
    let denom: f64 = g
        .boundary()
        .iter()
        .zip(&weights)
        .map(|(&i, m)| m * v[i] * v[i])
        .sum();
    if denom == 0.0 {
        return Err(Error::ZeroBoundaryRestriction);
    }
    Ok(energy(g, v) / denom)
}
