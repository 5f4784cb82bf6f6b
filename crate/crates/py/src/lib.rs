//! Python bindings: graphs with boundary, Steklov spectra, the lower bounds
//! and the family generators.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use steklov_core::families;
use steklov_core::verify::{self, Tolerances};
use steklov_core::{Error, GraphWithBoundary, Normalization};

create_exception!(steklov, SteklovError, PyException);
create_exception!(steklov, ParseError, SteklovError);
create_exception!(steklov, ValidationError, SteklovError);
create_exception!(steklov, NumericalError, SteklovError);
create_exception!(steklov, ParameterError, SteklovError);

/// Error category, mirroring the CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Parse,
    Validation,
    Numerical,
    Parameter,
}

fn kind_of(e: &Error) -> Kind {
    match e {
        Error::Parse(_)
        | Error::VertexOutOfRange { .. }
        | Error::Loop(_)
        | Error::DuplicateBoundary(_)
        | Error::DuplicateEdge(..)
        | Error::BadWeight(_) => Kind::Parse,
        Error::Invalid(_)
        | Error::Disconnected
        | Error::BoundaryTooSmall(_)
        | Error::EmptyBoundary => Kind::Validation,
        Error::InvalidParameter(_) | Error::BudgetExceeded(_) => Kind::Parameter,
        _ => Kind::Numerical,
    }
}

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match kind_of(&e) {
        Kind::Parse => ParseError::new_err(msg),
        Kind::Validation => ValidationError::new_err(msg),
        Kind::Numerical => NumericalError::new_err(msg),
        Kind::Parameter => ParameterError::new_err(msg),
    }
}

fn norm(name: &str) -> PyResult<Normalization> {
    name.parse().map_err(to_py)
}

/// A finite connected graph with a boundary vertex set.
#[pyclass(name = "Graph", module = "steklov", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: GraphWithBoundary,
}

impl From<GraphWithBoundary> for PyGraph {
    fn from(inner: GraphWithBoundary) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyGraph {
    /// `edges` holds `(i, j)` or `(i, j, weight)` tuples; parallel edges are
    /// merged by summing weights.
    #[new]
    fn new(n: usize, edges: Vec<Bound<'_, PyAny>>, boundary: Vec<usize>) -> PyResult<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for e in &edges {
            let edge = match e.extract::<(usize, usize, f64)>() {
                Ok(t) => t,
                Err(_) => {
                    let (i, j) = e.extract::<(usize, usize)>()?;
                    (i, j, 1.0)
                }
            };
            list.push(edge);
        }
        GraphWithBoundary::new(n, list, boundary)
            .map(Self::from)
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        GraphWithBoundary::from_json_str(text)
            .map(Self::from)
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn b(&self) -> usize {
        self.inner.b()
    }

    #[getter]
    fn boundary(&self) -> Vec<usize> {
        self.inner.boundary().to_vec()
    }

    #[getter]
    fn interior(&self) -> Vec<usize> {
        self.inner.interior()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.weight))
            .collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<(usize, f64)>> {
        self.check_vertex(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn measure(&self, v: usize) -> PyResult<f64> {
        self.check_vertex(v)?;
        Ok(self.inner.measure(v))
    }

    /// Names and details of the violated axioms; empty when valid.
    fn violations(&self) -> Vec<String> {
        match self.inner.validate() {
            Ok(()) => Vec::new(),
            Err(vs) => vs.iter().map(ToString::to_string).collect(),
        }
    }

    fn is_valid(&self) -> bool {
        self.inner.validate().is_ok()
    }

    /// Raises `ValidationError` listing every violation.
    fn validate(&self) -> PyResult<()> {
        self.inner.ensure_valid().map_err(to_py)
    }

    fn bfs_distances(&self, source: usize) -> PyResult<Vec<usize>> {
        Ok(self.inner.bfs_distances(source).map_err(to_py)?.dist)
    }

    fn diameter(&self) -> PyResult<usize> {
        self.inner.diameter().map_err(to_py)
    }

    fn boundary_diameter(&self) -> PyResult<usize> {
        self.inner.boundary_diameter().map_err(to_py)
    }

    fn boundary_volume(&self) -> f64 {
        self.inner.boundary_volume()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={}, boundary={:?})",
            self.inner.n(),
            self.inner.edges().len(),
            self.inner.boundary()
        )
    }
}

impl PyGraph {
    fn check_vertex(&self, v: usize) -> PyResult<()> {
        if v >= self.inner.n() {
            return Err(to_py(Error::VertexOutOfRange {
                vertex: v,
                n: self.inner.n(),
            }));
        }
        Ok(())
    }
}

/// Steklov eigenvalues with boundary eigenvectors and harmonic extensions.
#[pyclass(
    name = "Spectrum",
    module = "steklov",
    frozen,
    get_all,
    skip_from_py_object
)]
#[derive(Clone)]
struct PySpectrum {
    normalization: String,
    boundary: Vec<usize>,
    sigmas: Vec<f64>,
    boundary_eigvecs: Vec<Vec<f64>>,
    extensions: Vec<Vec<f64>>,
}

#[pymethods]
impl PySpectrum {
    /// `σ_1` clamped at zero, `None` when `b < 2`.
    #[getter]
    fn sigma1(&self) -> Option<f64> {
        self.sigmas.get(1).map(|s| s.max(0.0))
    }

    fn __repr__(&self) -> String {
        format!("Spectrum({}, sigmas={:?})", self.normalization, self.sigmas)
    }
}

#[pyclass(
    name = "BoundReport",
    module = "steklov",
    frozen,
    get_all,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyBoundReport {
    normalization: String,
    b: usize,
    d_b: usize,
    sigma1: f64,
    thm1: f64,
    thm2: f64,
    weighted: Option<f64>,
    slack: f64,
    violations: Vec<String>,
}

#[pymethods]
impl PyBoundReport {
    fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(b={}, d_B={}, sigma1={}, thm2={}, violations={})",
            self.b,
            self.d_b,
            self.sigma1,
            self.thm2,
            self.violations.len()
        )
    }
}

#[pyclass(
    name = "SearchReport",
    module = "steklov",
    frozen,
    get_all,
    skip_from_py_object
)]
struct PySearchReport {
    b: usize,
    d_b: usize,
    max_vertices: usize,
    evaluated: u64,
    min_sigma1: Option<f64>,
    minimizers: Vec<Py<PyGraph>>,
    reference_is_minimizer: Option<bool>,
}

#[pyfunction]
#[pyo3(signature = (g, norm = "unit"))]
fn steklov_spectrum(g: &PyGraph, norm: &str) -> PyResult<PySpectrum> {
    let s = steklov_core::steklov_spectrum(&g.inner, self::norm(norm)?).map_err(to_py)?;
    Ok(PySpectrum {
        normalization: s.normalization.to_string(),
        boundary: s.boundary,
        sigmas: s.sigmas,
        boundary_eigvecs: s.boundary_eigvecs,
        extensions: s.extensions,
    })
}

/// Dirichlet-to-Neumann matrix as nested lists, rows indexed like
/// `g.boundary`.
#[pyfunction]
fn dtn_matrix(g: &PyGraph) -> PyResult<Vec<Vec<f64>>> {
    Ok(steklov_core::dtn_matrix(&g.inner).map_err(to_py)?.to_rows())
}

#[pyfunction]
fn laplacian(g: &PyGraph) -> Vec<Vec<f64>> {
    steklov_core::laplacian(&g.inner).to_rows()
}

#[pyfunction]
fn harmonic_extension(g: &PyGraph, phi: Vec<f64>) -> PyResult<Vec<f64>> {
    steklov_core::harmonic_extension(&g.inner, &phi).map_err(to_py)
}

#[pyfunction]
fn normal_derivative(g: &PyGraph, v: Vec<f64>) -> PyResult<Vec<f64>> {
    steklov_core::normal_derivative(&g.inner, &v).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, v, norm = "unit"))]
fn rayleigh_quotient(g: &PyGraph, v: Vec<f64>, norm: &str) -> PyResult<f64> {
    steklov_core::rayleigh_quotient(&g.inner, &v, self::norm(norm)?).map_err(to_py)
}

#[pyfunction]
fn thm1_bound(b: usize, d_b: usize) -> PyResult<f64> {
    steklov_core::thm1_bound(b, d_b).map_err(to_py)
}

#[pyfunction]
fn thm2_bound(b: usize, d_b: usize) -> PyResult<f64> {
    steklov_core::thm2_bound(b, d_b).map_err(to_py)
}

#[pyfunction]
fn weighted_bound(g: &PyGraph) -> PyResult<f64> {
    steklov_core::weighted_bound(&g.inner).map_err(to_py)
}

#[pyfunction]
fn prop1_min_closed(b: usize) -> PyResult<f64> {
    steklov_core::prop1_min_closed(b).map_err(to_py)
}

/// `(k, y, value)` for each two-level candidate.
#[pyfunction]
fn spread_candidates(b: usize) -> PyResult<Vec<(usize, Vec<f64>, f64)>> {
    Ok(steklov_core::spread_candidates(b)
        .map_err(to_py)?
        .into_iter()
        .map(|c| (c.k, c.y, c.value))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (b, samples = 10_000, iters = 200, seed = 0))]
fn prop1_oracle(
    py: Python<'_>,
    b: usize,
    samples: usize,
    iters: usize,
    seed: u64,
) -> PyResult<(f64, Vec<f64>)> {
    py.detach(|| steklov_core::prop1_oracle(b, samples, iters, seed))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (g, norm = "unit"))]
fn check_bounds(g: &PyGraph, norm: &str) -> PyResult<PyBoundReport> {
    let r = steklov_core::check_bounds(&g.inner, self::norm(norm)?).map_err(to_py)?;
    Ok(PyBoundReport {
        normalization: r.normalization.to_string(),
        b: r.b,
        d_b: r.d_b,
        sigma1: r.sigma1,
        thm1: r.thm1,
        thm2: r.thm2,
        weighted: r.weighted,
        slack: r.slack,
        violations: r.violations,
    })
}

#[pyfunction]
fn path_graph(n: usize) -> PyResult<PyGraph> {
    families::path_graph(n).map(PyGraph::from).map_err(to_py)
}

#[pyfunction]
fn d_family(n: usize) -> PyResult<PyGraph> {
    families::d_family(n).map(PyGraph::from).map_err(to_py)
}

#[pyfunction]
fn h_family(b: usize, d_b: usize) -> PyResult<PyGraph> {
    families::h_family(b, d_b).map(PyGraph::from).map_err(to_py)
}

#[pyfunction]
fn h_family_sigma1(b: usize, d_b: usize) -> PyResult<f64> {
    families::h_family_sigma1(b, d_b).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n_interior, b, p, seed, weighted = false))]
fn random_graph(
    n_interior: usize,
    b: usize,
    p: f64,
    seed: u64,
    weighted: bool,
) -> PyResult<PyGraph> {
    families::random_valid_graph(n_interior, b, p, seed, weighted)
        .map(PyGraph::from)
        .map_err(to_py)
}

#[pyfunction]
fn search(py: Python<'_>, b: usize, d_b: usize, max_vertices: usize) -> PyResult<PySearchReport> {
    let r = py
        .detach(|| families::exhaustive_minimizer_search(b, d_b, max_vertices))
        .map_err(to_py)?;
    let minimizers = r
        .minimizers
        .into_iter()
        .map(|g| Py::new(py, PyGraph::from(g)))
        .collect::<PyResult<_>>()?;
    Ok(PySearchReport {
        b: r.b,
        d_b: r.d_b,
        max_vertices: r.max_vertices,
        evaluated: r.evaluated,
        min_sigma1: r.min_sigma1,
        minimizers,
        reference_is_minimizer: r.reference_is_minimizer,
    })
}

/// `(name, passed, expected, got, tolerance)`.
type CheckRow = (String, bool, String, String, f64);

/// Runs the reproduction suite, one row per check.
#[pyfunction]
#[pyo3(signature = (tol = verify::BASE_TOL))]
fn run_verification(py: Python<'_>, tol: f64) -> PyResult<Vec<CheckRow>> {
    let checks = py
        .detach(|| verify::run_suite(&Tolerances::new(tol)))
        .map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.expected, c.got, c.tolerance))
        .collect())
}

#[pymodule]
#[pyo3(name = "steklov")]
pub fn steklov_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("SteklovError", py.get_type::<SteklovError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add("ParameterError", py.get_type::<ParameterError>())?;

    m.add_class::<PyGraph>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PySearchReport>()?;

    m.add_function(wrap_pyfunction!(steklov_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(dtn_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_extension, m)?)?;
    m.add_function(wrap_pyfunction!(normal_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(rayleigh_quotient, m)?)?;

    m.add_function(wrap_pyfunction!(thm1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(thm2_bound, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_bound, m)?)?;
    m.add_function(wrap_pyfunction!(prop1_min_closed, m)?)?;
    m.add_function(wrap_pyfunction!(spread_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(prop1_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(check_bounds, m)?)?;

    m.add_function(wrap_pyfunction!(path_graph, m)?)?;
    m.add_function(wrap_pyfunction!(d_family, m)?)?;
    m.add_function(wrap_pyfunction!(h_family, m)?)?;
    m.add_function(wrap_pyfunction!(h_family_sigma1, m)?)?;
    m.add_function(wrap_pyfunction!(random_graph, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
