//! Python bindings. Reports come back as plain dicts and lists, built from
//! the same JSON documents the CLI prints.

use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use iasi_core::graph::{self, EdgeId};
use iasi_core::harness::{self, HarnessOptions, TheoremId};
use iasi_core::labeling::{self, SetLabeling};
use iasi_core::search::{self, Mode, SearchSpec};
use iasi_core::setcore::{self, DEFAULT_UNIVERSE_BOUND};
use iasi_core::transforms::{self, TransformResult};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let list = PyList::empty(py);
            for x in xs {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(err)?)
}

fn labeling_from(labels: &Bound<'_, PyDict>, bound: u32) -> PyResult<SetLabeling> {
    let mut f = SetLabeling::new();
    for (k, v) in labels.iter() {
        let name: String = k.extract()?;
        let set = match v.extract::<PyRef<'_, IntSet>>() {
            Ok(s) => s.inner.clone(),
            Err(_) => setcore::IntSet::new(v.extract::<Vec<u32>>()?, bound).map_err(err)?,
        };
        f.insert(name, set);
    }
    Ok(f)
}

fn labeling_to<'py>(py: Python<'py>, f: &SetLabeling) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (v, s) in f.iter() {
        dict.set_item(v, s.to_vec())?;
    }
    Ok(dict)
}

/// A non-empty finite set of non-negative integers.
#[pyclass(module = "iasi", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct IntSet {
    inner: setcore::IntSet,
}

#[pymethods]
impl IntSet {
    #[new]
    #[pyo3(signature = (elements, bound = DEFAULT_UNIVERSE_BOUND))]
    fn new(elements: Vec<u32>, bound: u32) -> PyResult<Self> {
        Ok(IntSet {
            inner: setcore::IntSet::new(elements, bound).map_err(err)?,
        })
    }

    /// Parses `{a,b,c}`.
    #[staticmethod]
    #[pyo3(signature = (text, bound = DEFAULT_UNIVERSE_BOUND))]
    fn parse(text: &str, bound: u32) -> PyResult<Self> {
        Ok(IntSet {
            inner: setcore::IntSet::parse_with_bound(text, bound).map_err(err)?,
        })
    }

    fn elements(&self) -> Vec<u32> {
        self.inner.to_vec()
    }

    fn sumset(&self, other: &IntSet) -> PyResult<IntSet> {
        Ok(IntSet {
            inner: self.inner.sumset(&other.inner).map_err(err)?,
        })
    }

    fn __add__(&self, other: &IntSet) -> PyResult<IntSet> {
        self.sumset(other)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, x: u32) -> bool {
        self.inner.contains(x)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("IntSet({:?})", self.inner.to_vec())
    }
}

/// A simple undirected graph with named vertices.
#[pyclass(module = "iasi", from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: graph::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (edges = Vec::new()))]
    fn new(edges: Vec<(String, String)>) -> PyResult<Self> {
        let inner = graph::Graph::from_edges(edges.iter().map(|(u, v)| (u.as_str(), v.as_str())))
            .map_err(err)?;
        Ok(Graph { inner })
    }

    /// Parses the edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: graph::Graph::parse(text).map_err(err)?,
        })
    }

    fn add_vertex(&mut self, name: &str) -> PyResult<()> {
        self.inner.add_vertex(name).map(|_| ()).map_err(err)
    }

    fn add_edge(&mut self, u: &str, v: &str) -> PyResult<()> {
        self.inner.ensure_vertex(u).map_err(err)?;
        self.inner.ensure_vertex(v).map_err(err)?;
        self.inner.add_edge(u, v).map_err(err)
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().to_vec()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .iter()
            .map(|&(i, j)| {
                (
                    self.inner.name(i).to_string(),
                    self.inner.name(j).to_string(),
                )
            })
            .collect()
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: &str) -> PyResult<usize> {
        self.inner.degree(v).map_err(err)
    }

    fn neighbors(&self, v: &str) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .neighbors(v)
            .map_err(err)?
            .into_iter()
            .map(String::from)
            .collect())
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    fn __eq__(&self, other: &Graph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// `{a + b : a in A, b in B}` as a sorted list.
#[pyfunction]
#[pyo3(signature = (a, b, bound = DEFAULT_UNIVERSE_BOUND))]
fn sumset(a: Vec<u32>, b: Vec<u32>, bound: u32) -> PyResult<Vec<u32>> {
    let a = setcore::IntSet::new(a, bound).map_err(err)?;
    let b = setcore::IntSet::new(b, bound).map_err(err)?;
    Ok(setcore::sumset(&a, &b).map_err(err)?.to_vec())
}

/// Compatibility classes of `A x B` with the derived counts.
#[pyfunction]
#[pyo3(signature = (a, b, bound = DEFAULT_UNIVERSE_BOUND))]
fn compatibility<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    b: Vec<u32>,
    bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let a = setcore::IntSet::new(a, bound).map_err(err)?;
    let b = setcore::IntSet::new(b, bound).map_err(err)?;
    let table = setcore::CompatibilityTable::new(&a, &b).map_err(err)?;
    let classes = PyDict::new(py);
    for c in table.classes() {
        classes.set_item(c.sum, c.pairs.clone())?;
    }
    let out = PyDict::new(py);
    out.set_item("classes", classes)?;
    out.set_item("index", table.index())?;
    out.set_item("neglecting_number", table.neglecting_number())?;
    out.set_item("max_class_size", table.max_class_size())?;
    out.set_item("has_saturated_class", table.has_saturated_class())?;
    Ok(out)
}

/// Verification report of `labels` (vertex -> list of ints) on `graph`.
#[pyfunction]
#[pyo3(signature = (graph, labels, bound = DEFAULT_UNIVERSE_BOUND))]
fn verify<'py>(
    py: Python<'py>,
    graph: &Graph,
    labels: &Bound<'py, PyDict>,
    bound: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let f = labeling_from(labels, bound)?;
    serialize(py, &labeling::verify(&graph.inner, &f).map_err(err)?)
}

/// Labels vertex `i` with `{2^i}`.
#[pyfunction]
#[pyo3(signature = (graph, bound = DEFAULT_UNIVERSE_BOUND))]
fn canonical_iasi<'py>(py: Python<'py>, graph: &Graph, bound: u32) -> PyResult<Bound<'py, PyDict>> {
    labeling_to(
        py,
        &labeling::canonical_iasi(&graph.inner, bound).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (graph, labels = None, bound = DEFAULT_UNIVERSE_BOUND))]
fn emit_dot(graph: &Graph, labels: Option<&Bound<'_, PyDict>>, bound: u32) -> PyResult<String> {
    let f = labels.map(|l| labeling_from(l, bound)).transpose()?;
    graph::emit_dot(&graph.inner, f.as_ref()).map_err(err)
}

fn transform_out<'py>(py: Python<'py>, t: TransformResult) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let provenance = PyDict::new(py);
    for (v, origin) in &t.provenance {
        provenance.set_item(v, serialize(py, origin)?)?;
    }
    out.set_item("provenance", provenance)?;
    out.set_item(
        "labels",
        t.induced_labeling
            .as_ref()
            .map(|f| labeling_to(py, f))
            .transpose()?,
    )?;
    out.set_item(
        "report",
        t.report.as_ref().map(|r| serialize(py, r)).transpose()?,
    )?;
    out.set_item("graph", Graph { inner: t.graph })?;
    Ok(out)
}

/// Line graph; with `labels`, also the induced labeling and its report.
#[pyfunction]
#[pyo3(signature = (graph, labels = None, bound = DEFAULT_UNIVERSE_BOUND))]
fn line_graph<'py>(
    py: Python<'py>,
    graph: &Graph,
    labels: Option<&Bound<'py, PyDict>>,
    bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let f = labels.map(|l| labeling_from(l, bound)).transpose()?;
    transform_out(
        py,
        transforms::line_graph_labeled(&graph.inner, f.as_ref()).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (graph, labels = None, bound = DEFAULT_UNIVERSE_BOUND))]
fn total_graph<'py>(
    py: Python<'py>,
    graph: &Graph,
    labels: Option<&Bound<'py, PyDict>>,
    bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let f = labels.map(|l| labeling_from(l, bound)).transpose()?;
    transform_out(
        py,
        transforms::total_graph_labeled(&graph.inner, f.as_ref()).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (graph, u, v, labels = None, bound = DEFAULT_UNIVERSE_BOUND))]
fn contract_edge<'py>(
    py: Python<'py>,
    graph: &Graph,
    u: &str,
    v: &str,
    labels: Option<&Bound<'py, PyDict>>,
    bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let f = labels.map(|l| labeling_from(l, bound)).transpose()?;
    let e = EdgeId::new(u, v);
    transform_out(
        py,
        transforms::contract_edge(&graph.inner, &e, f.as_ref()).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (graph, vertex, labels = None, bound = DEFAULT_UNIVERSE_BOUND))]
fn topological_reduction<'py>(
    py: Python<'py>,
    graph: &Graph,
    vertex: &str,
    labels: Option<&Bound<'py, PyDict>>,
    bound: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let f = labels.map(|l| labeling_from(l, bound)).transpose()?;
    transform_out(
        py,
        transforms::topological_reduction(&graph.inner, vertex, f.as_ref()).map_err(err)?,
    )
}

/// Exhaustive search over labels drawn from `{0..=ground_max}`.
#[pyfunction]
#[pyo3(signature = (
    graph,
    ground_max,
    mode = "iasi",
    uniform = None,
    max_label_size = None,
    node_budget = None,
    budget_seconds = None,
    bound = DEFAULT_UNIVERSE_BOUND,
))]
#[allow(clippy::too_many_arguments)]
fn find_labeling<'py>(
    py: Python<'py>,
    graph: &Graph,
    ground_max: u32,
    mode: &str,
    uniform: Option<usize>,
    max_label_size: Option<usize>,
    node_budget: Option<u64>,
    budget_seconds: Option<f64>,
    bound: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let mode: Mode = mode.parse().map_err(err)?;
    let mut spec = SearchSpec::prefix(mode, ground_max as usize + 1, bound).map_err(err)?;
    spec.uniform_vertex_size = uniform;
    spec.max_label_size = max_label_size;
    spec.node_budget = node_budget;
    if let Some(s) = budget_seconds {
        spec.time_budget = Some(Duration::try_from_secs_f64(s).map_err(err)?);
    }
    let g = graph.inner.clone();
    let outcome = py
        .detach(move || search::find_labeling(&g, &spec))
        .map_err(err)?;
    serialize(py, &outcome)
}

/// Counting lower bound on the ground-set size for `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, uniform = None))]
fn ground_set_lower_bound(n: usize, uniform: Option<usize>) -> PyResult<usize> {
    match uniform {
        None => search::ground_set_lower_bound(n),
        Some(l) => search::uniform_ground_set_lower_bound(n, l),
    }
    .map_err(err)
}

/// Runs the theorem suite and returns the machine-readable report.
#[pyfunction]
#[pyo3(signature = (max_n = 5, seed = 0, theorems = None))]
fn run_suite<'py>(
    py: Python<'py>,
    max_n: usize,
    seed: u64,
    theorems: Option<Vec<String>>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut opts = HarnessOptions::new(max_n, seed);
    opts.theorems = theorems
        .unwrap_or_default()
        .iter()
        .map(|t| t.parse::<TheoremId>())
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let report = py
        .detach(move || harness::generate_corpus(&opts).and_then(|c| harness::run_suite(&c, &opts)))
        .map_err(err)?;
    serialize(py, &report)
}

#[pymodule]
fn iasi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<IntSet>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(sumset, m)?)?;
    m.add_function(wrap_pyfunction!(compatibility, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_iasi, m)?)?;
    m.add_function(wrap_pyfunction!(emit_dot, m)?)?;
    m.add_function(wrap_pyfunction!(line_graph, m)?)?;
    m.add_function(wrap_pyfunction!(total_graph, m)?)?;
    m.add_function(wrap_pyfunction!(contract_edge, m)?)?;
    m.add_function(wrap_pyfunction!(topological_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(find_labeling, m)?)?;
    m.add_function(wrap_pyfunction!(ground_set_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("DEFAULT_UNIVERSE_BOUND", DEFAULT_UNIVERSE_BOUND)?;
    Ok(())
}
