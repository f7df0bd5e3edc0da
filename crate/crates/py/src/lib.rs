//! Python module `eulerizer`. Structured results come back as plain
//! dicts and lists, shaped like the CLI's JSON output.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyAny, PyTuple};
use serde::Serialize;

use euler_core::coloring::color3 as core_color3;
use euler_core::dynamics::{self, ErgodicMode};
use euler_core::eulerize::{self, BallEulerizeResult};
use euler_core::generators::{generate as core_generate, Fixture};
use euler_core::refine;
use euler_core::surface::{classify_surface, curvature_ledger as core_curvature};
use euler_core::{CoreError, Vertex};

fn err(e: CoreError) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

/// Converts via JSON so the Python shapes match the CLI.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "Graph", module = "eulerizer", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: euler_core::Graph,
}

impl From<euler_core::Graph> for PyGraph {
    fn from(inner: euler_core::Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (edges, vertices=None))]
    fn new(edges: Vec<(Vertex, Vertex)>, vertices: Option<Vec<Vertex>>) -> PyResult<Self> {
        let g = match vertices {
            Some(vs) => euler_core::Graph::build(&vs, &edges),
            None => euler_core::Graph::from_edges(&edges),
        };
        Ok(g.map_err(err)?.into())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(euler_core::Graph::from_json_str(text).map_err(err)?.into())
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn vertices(&self) -> Vec<Vertex> {
        self.inner.vertices().collect()
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges().collect()
    }

    fn degree(&self, v: Vertex) -> PyResult<usize> {
        self.inner.degree(v).map_err(|e| PyKeyError::new_err(e.to_string()))
    }

    fn odd_vertices(&self) -> Vec<Vertex> {
        self.inner.odd_vertices().into_iter().collect()
    }

    fn is_eulerian(&self) -> bool {
        self.inner.is_eulerian()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    /// Surface report as a dict.
    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &classify_surface(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.inner.vertex_count(), self.inner.edge_count())
    }
}

/// Builds a fixture from its command form, e.g. `generate("wheel", 12)`.
#[pyfunction]
#[pyo3(signature = (name, *params))]
fn generate(name: &str, params: &Bound<'_, PyTuple>) -> PyResult<PyGraph> {
    let params: Vec<String> = params.iter().map(|p| Ok(p.str()?.to_string())).collect::<PyResult<_>>()?;
    let mut tokens = vec![name];
    tokens.extend(params.iter().map(String::as_str));
    let f = Fixture::parse(&tokens).map_err(err)?;
    Ok(core_generate(&f).map_err(err)?.into())
}

#[pyfunction]
fn edge_refine(py: Python<'_>, g: &PyGraph, a: Vertex, b: Vertex) -> PyResult<(PyGraph, Py<PyAny>)> {
    let (h, mv) = refine::edge_refine(&g.inner, (a, b)).map_err(err)?;
    Ok((h.into(), to_py(py, &mv)?))
}

#[pyfunction]
fn barycentric_refine(g: &PyGraph) -> PyResult<PyGraph> {
    Ok(refine::barycentric_refine(&g.inner).map_err(err)?.into())
}

/// Heals a closed surface. Returns the Eulerian graph and the heal log.
#[pyfunction]
#[pyo3(signature = (g, seed=0, max_cuts=None))]
fn eulerize_closed(py: Python<'_>, g: &PyGraph, seed: u64, max_cuts: Option<usize>) -> PyResult<(PyGraph, Py<PyAny>)> {
    let limit = max_cuts.unwrap_or_else(|| eulerize::default_max_cuts(&g.inner));
    let (h, log) = py.detach(|| eulerize::eulerize_closed(&g.inner, seed, limit)).map_err(err)?;
    Ok((h.into(), to_py(py, &log)?))
}

/// Eulerizes a disc with interior cuts. Returns the outcome name, the best
/// graph (or `None` when refused) and details.
#[pyfunction]
#[pyo3(signature = (g, seed=0, budget=None))]
fn eulerize_ball(py: Python<'_>, g: &PyGraph, seed: u64, budget: Option<usize>) -> PyResult<(String, Option<PyGraph>, Py<PyAny>)> {
    let limit = budget.unwrap_or_else(|| eulerize::default_ball_budget(&g.inner));
    let out = py.detach(|| eulerize::eulerize_ball(&g.inner, seed, limit)).map_err(err)?;
    Ok(match out {
        BallEulerizeResult::Success { graph, log } => ("Success".into(), Some(graph.into()), to_py(py, &log)?),
        BallEulerizeResult::RefusedBoundaryNotMod3 { boundary_length } => {
            ("RefusedBoundaryNotMod3".into(), None, to_py(py, &boundary_length)?)
        }
        BallEulerizeResult::BudgetExhausted { best_graph, log, .. } => {
            ("BudgetExhausted".into(), Some(best_graph.into()), to_py(py, &log)?)
        }
    })
}

#[pyfunction]
fn ergodic_components(py: Python<'_>, g: &PyGraph) -> PyResult<Py<PyAny>> {
    to_py(py, &dynamics::ergodic_components(&g.inner).map_err(err)?)
}

/// `mode` is `"closed"` or `"billiard"`.
#[pyfunction]
#[pyo3(signature = (g, mode="closed"))]
fn is_ergodic(g: &PyGraph, mode: &str) -> PyResult<bool> {
    let m = match mode {
        "closed" => ErgodicMode::ClosedSurface,
        "billiard" => ErgodicMode::Billiard,
        other => return Err(PyValueError::new_err(format!("unknown mode {other}"))),
    };
    dynamics::is_ergodic(&g.inner, m).map_err(err)
}

#[pyfunction]
fn geodesic_distance(g: &PyGraph, x: Vertex, y: Vertex) -> PyResult<Option<usize>> {
    dynamics::geodesic_distance(&g.inner, x, y).map_err(err)
}

#[pyfunction]
fn color3(py: Python<'_>, g: &PyGraph) -> PyResult<Py<PyAny>> {
    to_py(py, &core_color3(&g.inner, None).map_err(err)?)
}

/// Curvature per vertex and total, as exact fraction strings.
#[pyfunction]
fn curvature(py: Python<'_>, g: &PyGraph) -> PyResult<Py<PyAny>> {
    let report = classify_surface(&g.inner);
    to_py(py, &core_curvature(&g.inner, &report).map_err(err)?)
}

#[pymodule]
fn eulerizer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(edge_refine, m)?)?;
    m.add_function(wrap_pyfunction!(barycentric_refine, m)?)?;
    m.add_function(wrap_pyfunction!(eulerize_closed, m)?)?;
    m.add_function(wrap_pyfunction!(eulerize_ball, m)?)?;
    m.add_function(wrap_pyfunction!(ergodic_components, m)?)?;
    m.add_function(wrap_pyfunction!(is_ergodic, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(color3, m)?)?;
    m.add_function(wrap_pyfunction!(curvature, m)?)?;
    Ok(())
}
