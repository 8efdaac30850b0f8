//! Python bindings. Vertices are 0-indexed on the Python side.

use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

use necsolve_core::graph::{Graph as CoreGraph, VertexSet};
use necsolve_core::layout::{cut_widths, generate_layout, LayoutStrategy, RootedLayout};
use necsolve_core::nec::{nec as core_nec, Depth};
use necsolve_core::problem::{catalog, ProblemSpec, CATALOG};
use necsolve_core::solve::{solve as core_solve, Outcome, Pruning, SolveOptions};
use necsolve_core::testkit::{gen_named, oracle_solve, NamedGraph, ORACLE_CAP};
use necsolve_core::Error;

fn py_err(e: Error) -> PyErr {
    if e.is_resource_cap() {
        PyMemoryError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn vertex_set(n: usize, vs: &[usize]) -> PyResult<VertexSet> {
    if let Some(v) = vs.iter().find(|&&v| v >= n) {
        return Err(PyValueError::new_err(format!("vertex {v} out of range")));
    }
    Ok(VertexSet::from_vertices(n, vs.iter().copied()))
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: CoreGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, weights=None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, weights: Option<Vec<i64>>) -> PyResult<Self> {
        let mut g = CoreGraph::from_edges(n, &edges).map_err(py_err)?;
        if let Some(w) = weights {
            g = g.with_weights(w).map_err(py_err)?;
        }
        Ok(PyGraph { inner: g })
    }

    /// Parses the `p`/`w`/`e` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        CoreGraph::parse(text).map(|inner| PyGraph { inner }).map_err(py_err)
    }

    /// `path:N`, `cycle:N`, `grid:RxC`, `complete:N` or `random:N:P`.
    #[staticmethod]
    #[pyo3(signature = (kind, seed=0))]
    fn generate(kind: &str, seed: u64) -> PyResult<Self> {
        let named = NamedGraph::parse(kind, seed).map_err(py_err)?;
        gen_named(&named).map(|inner| PyGraph { inner }).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn weights(&self) -> Vec<i64> {
        self.inner.weights().to_vec()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Number of d-neighbor classes over `side`; `depth=None` counts exactly.
    #[pyo3(signature = (side, depth=Some(1)))]
    fn nec(&self, side: Vec<usize>, depth: Option<u32>) -> PyResult<usize> {
        let s = vertex_set(self.inner.n(), &side)?;
        let d = depth.map_or(Depth::Exact, Depth::Capped);
        core_nec(&self.inner, &s, d, necsolve_core::nec::DEFAULT_CAP).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

#[pyclass(name = "Layout", frozen)]
struct PyLayout {
    inner: RootedLayout,
}

#[pymethods]
impl PyLayout {
    /// Parses the nested-parentheses format (1-indexed leaves).
    #[staticmethod]
    fn parse(text: &str, n: usize) -> PyResult<Self> {
        RootedLayout::parse(text, n).map(|inner| PyLayout { inner }).map_err(py_err)
    }

    /// `linear`, `random` or `greedy:D`.
    #[staticmethod]
    #[pyo3(signature = (graph, strategy="linear", seed=0))]
    fn generate(graph: &PyGraph, strategy: &str, seed: u64) -> PyResult<Self> {
        let st = LayoutStrategy::parse(strategy, graph.inner.n(), seed).map_err(py_err)?;
        generate_layout(&graph.inner, &st).map(|inner| PyLayout { inner }).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// (mw, rw, rwq, mim) maxima over all nodes; mim is None past the budget.
    #[pyo3(signature = (graph, mim_budget=100_000))]
    fn widths(&self, graph: &PyGraph, mim_budget: usize) -> PyResult<(usize, usize, usize, Option<usize>)> {
        self.inner.validate(&graph.inner).map_err(py_err)?;
        let w = cut_widths(&self.inner, &graph.inner, mim_budget > 0, mim_budget);
        Ok((w.mw, w.rw, w.rwq, w.mim))
    }
}

#[pyclass(name = "Result", frozen, get_all)]
struct PyOutcome {
    status: String,
    value: Option<i64>,
    witness: Option<Vec<usize>>,
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        format!("Result(status={:?}, value={:?}, witness={:?})", self.status, self.value, self.witness)
    }
}

fn spec_for(problem: &str, terminals: Option<Vec<usize>>) -> PyResult<ProblemSpec> {
    let mut spec = catalog(problem).map_err(py_err)?;
    spec.terminals = terminals;
    Ok(spec)
}

/// Solves a catalog problem along `layout` (generated linearly if omitted).
#[pyfunction]
#[pyo3(signature = (graph, problem, layout=None, terminals=None, pruning="always"))]
fn solve(
    py: Python<'_>,
    graph: &PyGraph,
    problem: &str,
    layout: Option<&PyLayout>,
    terminals: Option<Vec<usize>>,
    pruning: &str,
) -> PyResult<PyOutcome> {
    let spec = spec_for(problem, terminals)?;
    let layout = match layout {
        Some(l) => l.inner.clone(),
        None => generate_layout(&graph.inner, &LayoutStrategy::Linear((0..graph.inner.n()).collect())).map_err(py_err)?,
    };
    let opts = SolveOptions {
        pruning: Pruning::parse(pruning).map_err(py_err)?,
        ..SolveOptions::default()
    };
    let g = &graph.inner;
    let rep = py.detach(|| core_solve(g, &layout, &spec, &opts)).map_err(py_err)?;
    Ok(match rep.outcome {
        Outcome::Optimal(s) => PyOutcome {
            status: "optimal".into(),
            value: Some(s.value),
            witness: Some(s.witness.to_vec()),
        },
        Outcome::Infeasible => PyOutcome {
            status: "infeasible".into(),
            value: None,
            witness: None,
        },
    })
}

/// Exhaustive optimum, for small graphs.
#[pyfunction]
#[pyo3(signature = (graph, problem, terminals=None))]
fn oracle(graph: &PyGraph, problem: &str, terminals: Option<Vec<usize>>) -> PyResult<Option<i64>> {
    let spec = spec_for(problem, terminals)?;
    oracle_solve(&graph.inner, &spec, ORACLE_CAP).map(|r| r.best).map_err(py_err)
}

#[pyfunction]
fn problems() -> Vec<&'static str> {
    CATALOG.to_vec()
}

#[pymodule]
fn necsolve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLayout>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(problems, m)?)?;
    Ok(())
}
