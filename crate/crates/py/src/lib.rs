//! Python bindings for `leavitt`.
//!
//! Exposes graphs, algebras, elements and truncated elements, plus the
//! structure checks as JSON-shaped dictionaries.

use std::collections::BTreeMap;

use leavitt::completion::{e_of, e_vertex};
use leavitt::filtration::min_ord;
use leavitt::structure::{decompose, verify, Suite};
use leavitt::{Field, Order};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyModule;

create_exception!(leavitt_py, LeavittError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    LeavittError::new_err(e.to_string())
}

fn order(text: &str) -> PyResult<Order> {
    text.parse().map_err(err)
}

fn to_python<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

/// A finite directed graph.
#[pyclass(module = "leavitt_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Graph {
    inner: leavitt::Graph,
}

#[pymethods]
impl Graph {
    /// Builds a graph from vertex names and `(name, src, dst)` edges.
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> PyResult<Self> {
        Ok(Graph {
            inner: leavitt::Graph::new(vertices, edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: leavitt::Graph::from_json(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(err)?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        let g = &self.inner;
        g.vertices().map(|v| g.vertex_name(v).to_string()).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String, String)> {
        let g = &self.inner;
        g.edges()
            .map(|e| {
                (
                    g.edge_name(e).to_string(),
                    g.vertex_name(g.source(e)).to_string(),
                    g.vertex_name(g.range(e)).to_string(),
                )
            })
            .collect()
    }

    /// Minimal hereditary subsets, each as a sorted list of names.
    fn frame(&self) -> Vec<Vec<String>> {
        self.sets(self.inner.frame())
    }

    fn w_perp(&self, w: Vec<String>) -> PyResult<Vec<String>> {
        let g = &self.inner;
        let set = g.vertex_set(w.iter().map(String::as_str)).map_err(err)?;
        let perp = g.w_perp(&set).map_err(err)?;
        Ok(perp.iter().map(|&v| g.vertex_name(v).to_string()).collect())
    }

    /// The regular specialization chosen by `construct_regular`.
    fn regular_specialization(&self) -> BTreeMap<String, String> {
        let g = &self.inner;
        let gamma = leavitt::Specialization::construct_regular(g);
        g.vertices()
            .filter_map(|v| {
                gamma
                    .special_edge(v)
                    .map(|e| (g.vertex_name(v).to_string(), g.edge_name(e).to_string()))
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Graph({})", self.inner)
    }
}

impl Graph {
    fn sets(&self, sets: Vec<leavitt::VertexSet>) -> Vec<Vec<String>> {
        let g = &self.inner;
        sets.iter()
            .map(|s| s.iter().map(|&v| g.vertex_name(v).to_string()).collect())
            .collect()
    }
}

/// A Leavitt path algebra with a fixed specialization and coefficient field.
#[pyclass(module = "leavitt_py", frozen)]
pub struct Algebra {
    inner: leavitt::Algebra,
}

#[pymethods]
impl Algebra {
    /// `gamma` maps each non-sink vertex to its special edge; `None` picks
    /// the regular specialization. `field` is `"q"` or `"fp:<p>"`.
    #[new]
    #[pyo3(signature = (graph, gamma=None, field="q"))]
    fn new(graph: &Graph, gamma: Option<BTreeMap<String, String>>, field: &str) -> PyResult<Self> {
        let g = graph.inner.clone();
        let gamma = match gamma {
            Some(map) => leavitt::Specialization::from_names(&g, map.iter().map(|(v, e)| (v.as_str(), e.as_str())))
                .map_err(err)?,
            None => leavitt::Specialization::construct_regular(&g),
        };
        let field: Field = field.parse().map_err(err)?;
        Ok(Algebra {
            inner: leavitt::Algebra::new(g, gamma, field).map_err(err)?,
        })
    }

    #[getter]
    fn graph(&self) -> Graph {
        Graph {
            inner: self.inner.graph().clone(),
        }
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    fn is_frame_finite(&self) -> bool {
        self.inner.gamma().is_frame_finite(self.inner.graph())
    }

    fn is_regular(&self) -> bool {
        self.inner.gamma().is_regular(self.inner.graph())
    }

    /// Parses an expression and returns its normal form.
    fn parse(&self, text: &str) -> PyResult<Element> {
        Ok(Element {
            inner: leavitt::parse(&self.inner, text).map_err(err)?,
        })
    }

    fn zero(&self) -> Element {
        Element {
            inner: self.inner.zero(),
        }
    }

    fn one(&self) -> Element {
        Element {
            inner: self.inner.one(),
        }
    }

    /// `e(W)` truncated at `prec` (an integer, `a/b` or `inf`).
    #[pyo3(signature = (w, prec="4"))]
    fn idempotent(&self, w: Vec<String>, prec: &str) -> PyResult<Truncated> {
        let g = self.inner.graph();
        let set = g.vertex_set(w.iter().map(String::as_str)).map_err(err)?;
        Ok(Truncated {
            inner: e_of(&self.inner, &set, order(prec)?).map_err(err)?,
        })
    }

    /// The vertex idempotent `e_v` truncated at `prec`.
    #[pyo3(signature = (v, prec="4"))]
    fn vertex_idempotent(&self, v: &str, prec: &str) -> PyResult<Truncated> {
        let v = self.inner.graph().vertex(v).map_err(err)?;
        Ok(Truncated {
            inner: e_vertex(&self.inner, v, order(prec)?).map_err(err)?,
        })
    }

    /// Runs a verification suite and returns the report as a dictionary.
    #[pyo3(signature = (suite="all", prec="4"))]
    fn verify<'py>(&self, py: Python<'py>, suite: &str, prec: &str) -> PyResult<Bound<'py, PyAny>> {
        let suite: Suite = suite.parse().map_err(err)?;
        let report = verify(&self.inner, suite, order(prec)?, None).map_err(err)?;
        to_python(py, &report.to_json())
    }

    #[pyo3(signature = (prec="4"))]
    fn decompose<'py>(&self, py: Python<'py>, prec: &str) -> PyResult<Bound<'py, PyAny>> {
        let report = decompose(&self.inner, order(prec)?).map_err(err)?;
        to_python(py, &report.to_json(self.inner.graph()))
    }

    fn __repr__(&self) -> String {
        format!("Algebra({}, field={})", self.inner.graph(), self.inner.field())
    }
}

/// An element of the algebra in normal form.
#[pyclass(module = "leavitt_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Element {
    inner: leavitt::Element,
}

#[pymethods]
impl Element {
    fn __add__(&self, other: &Element) -> PyResult<Element> {
        Ok(Element {
            inner: self.inner.try_add(&other.inner).map_err(err)?,
        })
    }

    fn __sub__(&self, other: &Element) -> PyResult<Element> {
        Ok(Element {
            inner: self.inner.try_sub(&other.inner).map_err(err)?,
        })
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        Ok(Element {
            inner: self.inner.try_mul(&other.inner).map_err(err)?,
        })
    }

    fn __neg__(&self) -> Element {
        Element { inner: -&self.inner }
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __bool__(&self) -> bool {
        !self.inner.is_zero()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// The involution.
    fn star(&self) -> Element {
        Element {
            inner: self.inner.star(),
        }
    }

    /// The least order over the support, as text (`"inf"` for zero).
    fn ord(&self) -> String {
        min_ord(&self.inner).to_string()
    }

    /// `(monomial, coefficient)` pairs in canonical order.
    fn terms(&self) -> Vec<(String, String)> {
        let alg = self.inner.algebra();
        self.inner
            .terms()
            .map(|(m, c)| (leavitt::expr::render_monomial(alg, m), c.to_string()))
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.inner.to_string())
    }
}

/// An element of the completion known modulo `V_K`.
#[pyclass(module = "leavitt_py", frozen)]
pub struct Truncated {
    inner: leavitt::TruncatedElement,
}

#[pymethods]
impl Truncated {
    #[getter]
    fn body(&self) -> Element {
        Element {
            inner: self.inner.body().clone(),
        }
    }

    #[getter]
    fn prec(&self) -> String {
        self.inner.prec().to_string()
    }

    fn __mul__(&self, other: &Truncated) -> PyResult<Truncated> {
        Ok(Truncated {
            inner: self.inner.try_mul(&other.inner).map_err(err)?,
        })
    }

    fn __add__(&self, other: &Truncated) -> PyResult<Truncated> {
        Ok(Truncated {
            inner: self.inner.try_add(&other.inner).map_err(err)?,
        })
    }

    /// Whether the two agree modulo `V_K`, with the usual slack of one.
    fn equal_mod(&self, other: &Truncated, k: &str) -> PyResult<bool> {
        self.inner.equal_mod(&other.inner, order(k)?).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Truncated({:?})", self.inner.to_string())
    }
}

/// Runs the `lpa` command line in-process and returns `(code, stdout, stderr)`.
#[pyfunction]
fn run_cli(argv: Vec<String>) -> (i32, String, String) {
    let out = leavitt::cli::run(std::iter::once("lpa".to_string()).chain(argv));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn leavitt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LeavittError", m.py().get_type::<LeavittError>())?;
    m.add_class::<Graph>()?;
    m.add_class::<Algebra>()?;
    m.add_class::<Element>()?;
    m.add_class::<Truncated>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    #[test]
    fn module_round_trip() {
        Python::initialize();
        Python::attach(|py| {
            let module = pyo3::wrap_pymodule!(leavitt_py)(py);
            let locals = PyDict::new(py);
            locals.set_item("lp", module).unwrap();
            py.run(
                cr#"
g = lp.Graph(["v", "w"], [("e", "v", "v"), ("f", "v", "w")])
a = lp.Algebra(g, {"v": "e"})
assert str(a.parse("e e*")) == "v - f f*"
assert a.parse("f* f") == a.parse("w")
assert a.verify("partition", "4")["summary"]["refused"] == 2
try:
    lp.Algebra(g, {"v": "f"}, "fp:4")
    raise AssertionError("composite modulus accepted")
except lp.LeavittError:
    pass
"#,
                None,
                Some(&locals),
            )
            .unwrap();
        });
    }
}
