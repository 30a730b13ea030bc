//! Python bindings: load instances, simulate, solve, kernelize, reduce.
//!
//! Structured results come back as plain dicts and lists (the same JSON the
//! command line prints); rationals are exact strings such as `"25/3"`.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

use tpath::addition::{solve_addition_dp, solve_addition_exhaustive, PathWithDetours};
use tpath::deletion::{solve_deletion_branching, solve_deletion_exhaustive};
use tpath::dot::export_dot;
use tpath::figures;
use tpath::io::{parse_instance, serialize_instance, to_document, Instance as CoreInstance};
use tpath::kernel::{apply_rules, solve_deletion_via_kernel, to_false_promises, Kernelized};
use tpath::model::PlanningModel;
use tpath::rational::parse_rational;
use tpath::reductions;

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Converts JSON to Python objects through the `json` module.
fn to_python<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (value.to_string(),))
}

fn rational(text: &str) -> PyResult<tpath::Rational> {
    parse_rational(text).ok_or_else(|| value_error(format!("`{text}` is not a rational")))
}

/// A validated instance of any kind.
#[pyclass(name = "Instance", module = "tpath_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: CoreInstance,
}

#[pymethods]
impl PyInstance {
    /// Parses a JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_instance(text).map(|inner| PyInstance { inner }).map_err(value_error)
    }

    /// Reads a JSON document from a file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        serialize_instance(&self.inner)
    }

    /// The document as a dict.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let value = serde_json::to_value(to_document(&self.inner)).map_err(value_error)?;
        to_python(py, &value)
    }

    #[getter]
    fn kind(&self) -> String {
        match serde_json::to_value(self.inner.kind()) {
            Ok(Value::String(s)) => s,
            _ => unreachable!("kinds serialize as strings"),
        }
    }

    /// Runs the agent; returns `{"steps", "outcome", "perceived_at"}`.
    fn simulate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let run = match &self.inner {
            CoreInstance::Model(m) => m.simulate(),
            CoreInstance::Deletion(d) => d.model.simulate(),
            CoreInstance::FpDeletion(d) => d.model.simulate(),
            CoreInstance::Addition(a) => a.model.simulate(),
            _ => return Err(value_error(format!("cannot simulate a `{}` instance", self.kind()))),
        };
        to_python(py, &serde_json::to_value(run).map_err(value_error)?)
    }

    /// Deleted arc ids and the witness walk, or `None` when no solution exists.
    #[pyo3(signature = (solver = "branching"))]
    fn solve_deletion<'py>(&self, py: Python<'py>, solver: &str) -> PyResult<Option<Bound<'py, PyAny>>> {
        let CoreInstance::Deletion(inst) = &self.inner else {
            return Err(value_error("solve_deletion needs a `deletion` instance"));
        };
        let solution = match solver {
            "exhaustive" => solve_deletion_exhaustive(inst),
            "branching" => solve_deletion_branching(inst),
            "kernel" => solve_deletion_via_kernel(inst),
            other => return Err(value_error(format!("unknown solver `{other}`"))),
        };
        solution.map(|s| to_python(py, &json!({ "deleted": s.deleted, "witness": s.witness }))).transpose()
    }

    /// Selected candidate ids and the witness walk, or `None`.
    #[pyo3(signature = (solver = "exhaustive"))]
    fn solve_addition<'py>(&self, py: Python<'py>, solver: &str) -> PyResult<Option<Bound<'py, PyAny>>> {
        let CoreInstance::Addition(inst) = &self.inner else {
            return Err(value_error("solve_addition needs an `addition` instance"));
        };
        let solution = match solver {
            "exhaustive" => solve_addition_exhaustive(inst),
            "dp" => solve_addition_dp(&PathWithDetours::new(inst.clone()).map_err(value_error)?),
            other => return Err(value_error(format!("unknown solver `{other}`"))),
        };
        solution.map(|s| to_python(py, &json!({ "selected": s.selected, "witness": s.witness }))).transpose()
    }

    /// Returns `(kernel, trace)`; `kernel` is `None` for a trivial no.
    fn kernelize<'py>(&self, py: Python<'py>) -> PyResult<(Option<PyInstance>, Bound<'py, PyAny>)> {
        let inst = match &self.inner {
            CoreInstance::Deletion(d) => to_false_promises(d),
            CoreInstance::FpDeletion(d) => d.clone(),
            _ => return Err(value_error("kernelize needs a `deletion` or `fp_deletion` instance")),
        };
        let (kernel, trace) = apply_rules(&inst);
        let kernel = match kernel {
            Kernelized::Kernel(k) => Some(PyInstance { inner: CoreInstance::FpDeletion(k) }),
            Kernelized::TrivialNo => None,
        };
        Ok((kernel, to_python(py, &serde_json::to_value(trace).map_err(value_error)?)?))
    }

    fn export_dot(&self) -> String {
        export_dot(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("<Instance kind={}>", self.kind())
    }
}

fn expect_spmve(inst: &PyInstance) -> PyResult<&reductions::SpmveInstance> {
    match &inst.inner {
        CoreInstance::Spmve(p) => Ok(p),
        _ => Err(value_error("expected an `spmve` instance")),
    }
}

fn expect_ksum(inst: &PyInstance) -> PyResult<&reductions::KsumInstance> {
    match &inst.inner {
        CoreInstance::Ksum(q) => Ok(q),
        _ => Err(value_error("expected a `ksum` instance")),
    }
}

/// The worked example graph as a `model` instance.
#[pyfunction]
#[pyo3(signature = (reward = "24"))]
fn figure1(reward: &str) -> PyResult<PyInstance> {
    Ok(PyInstance { inner: CoreInstance::Model(figures::figure1(rational(reward)?)) })
}

/// The worked deletion example: delete at most `k` arcs so the agent uses `dt`.
#[pyfunction]
#[pyo3(signature = (k = 1))]
fn figure1_deletion(k: usize) -> PyInstance {
    PyInstance { inner: CoreInstance::Deletion(figures::figure1_deletion(k)) }
}

#[pyfunction]
#[pyo3(signature = (source, beta = "1/2"))]
fn reduce_spmve_thm1(source: &PyInstance, beta: &str) -> PyResult<PyInstance> {
    let inst = reductions::reduce_spmve_thm1(expect_spmve(source)?, &rational(beta)?).map_err(value_error)?;
    Ok(PyInstance { inner: CoreInstance::Deletion(inst) })
}

#[pyfunction]
#[pyo3(signature = (source, empty_t = false))]
fn reduce_spmve_thm2(source: &PyInstance, empty_t: bool) -> PyResult<PyInstance> {
    let inst = reductions::reduce_spmve_thm2(expect_spmve(source)?, empty_t).map_err(value_error)?;
    Ok(PyInstance { inner: CoreInstance::Deletion(inst) })
}

#[pyfunction]
#[pyo3(signature = (source, green_in_graph = false))]
fn reduce_ksum(source: &PyInstance, green_in_graph: bool) -> PyResult<PyInstance> {
    let red = reductions::reduce_ksum(expect_ksum(source)?, green_in_graph).map_err(value_error)?;
    Ok(PyInstance { inner: CoreInstance::Addition(red.instance) })
}

#[pyfunction]
fn spmve_bruteforce(source: &PyInstance) -> PyResult<bool> {
    Ok(reductions::spmve_bruteforce(expect_spmve(source)?))
}

#[pyfunction]
fn ksum_bruteforce(source: &PyInstance) -> PyResult<bool> {
    Ok(reductions::ksum_bruteforce(expect_ksum(source)?))
}

#[pymodule]
fn tpath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(figure1, m)?)?;
    m.add_function(wrap_pyfunction!(figure1_deletion, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_spmve_thm1, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_spmve_thm2, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_ksum, m)?)?;
    m.add_function(wrap_pyfunction!(spmve_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(ksum_bruteforce, m)?)?;
    Ok(())
}
