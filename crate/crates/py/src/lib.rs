//! Python bindings for `asymcover`.

use std::time::Duration;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use asymcover::bounds::{self, Budget};
use asymcover::codefile;
use asymcover::constructions;
use asymcover::cube;
use asymcover::exact::{self, ExactLimits, ExactStatus};
use asymcover::ip;
use asymcover::linear;
use asymcover::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::BudgetExceeded { .. } | Error::Verification(_) | Error::InconsistentGrid { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
        Error::Io(e) => e.into(),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A set of vertices of the n-cube, optionally tagged with a covering radius.
#[pyclass(name = "Code", module = "asymcover_py", frozen)]
struct PyCode {
    inner: cube::Code,
}

#[pymethods]
impl PyCode {
    #[new]
    #[pyo3(signature = (n, words, r=None))]
    fn new(n: u32, words: Vec<String>, r: Option<u32>) -> PyResult<Self> {
        let code = codefile::parse_words(n, &words).map_err(to_py)?;
        Ok(PyCode {
            inner: match r {
                Some(r) => code.with_radius(r),
                None => code,
            },
        })
    }

    /// Parses JSON or the plain-text code format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        codefile::parse(text).map(|inner| PyCode { inner }).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn r(&self) -> Option<u32> {
        self.inner.radius()
    }

    /// Codewords as bitstrings, coordinate 1 leftmost.
    #[getter]
    fn words(&self) -> Vec<String> {
        self.inner
            .iter()
            .map(|w| codefile::to_bitstring(w, self.inner.n()))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Code(n={}, r={:?}, size={})", self.inner.n(), self.inner.radius(), self.inner.len())
    }

    fn __eq__(&self, other: &PyCode) -> bool {
        self.inner == other.inner
    }

    #[pyo3(signature = (r=None))]
    fn covers(&self, r: Option<u32>) -> PyResult<bool> {
        let r = self.radius_or(r)?;
        cube::covers(&self.inner, r).map_err(to_py)
    }

    #[pyo3(signature = (r=None))]
    fn uncovered(&self, r: Option<u32>) -> PyResult<Vec<String>> {
        let r = self.radius_or(r)?;
        let n = self.inner.n();
        Ok(cube::uncovered(&self.inner, r)
            .map_err(to_py)?
            .into_iter()
            .map(|w| codefile::to_bitstring(w, n))
            .collect())
    }

    /// Smallest radius that covers, or None when the all-ones word is missing.
    fn covering_radius(&self) -> PyResult<Option<u32>> {
        cube::covering_radius(&self.inner).map_err(to_py)
    }

    fn level_profile(&self) -> Vec<u64> {
        cube::level_profile(&self.inner).counts
    }

    fn contraction(&self, i: u32) -> PyResult<Self> {
        cube::contraction(&self.inner, i).map(|inner| PyCode { inner }).map_err(to_py)
    }

    fn shortening(&self, i: u32) -> PyResult<Self> {
        cube::shortening(&self.inner, i).map(|inner| PyCode { inner }).map_err(to_py)
    }

    fn complement_ones(&self) -> Self {
        PyCode {
            inner: cube::complement_ones(&self.inner),
        }
    }

    fn to_json(&self) -> String {
        codefile::to_json(&self.inner)
    }
}

impl PyCode {
    fn radius_or(&self, r: Option<u32>) -> PyResult<u32> {
        r.or(self.inner.radius())
            .ok_or_else(|| PyValueError::new_err("code has no radius; pass r"))
    }
}

fn wrap(res: asymcover::Result<cube::Code>) -> PyResult<PyCode> {
    res.map(|inner| PyCode { inner }).map_err(to_py)
}

#[pyfunction]
fn diagonal_code(n: u32, coradius: u32) -> PyResult<PyCode> {
    wrap(constructions::diagonal_code(n, coradius))
}

#[pyfunction]
fn greedy_code(py: Python<'_>, n: u32, r: u32) -> PyResult<PyCode> {
    wrap(py.detach(|| constructions::greedy_code(n, r)))
}

#[pyfunction]
#[pyo3(signature = (n, r, seed=0))]
fn random_code_nu(py: Python<'_>, n: u32, r: u32, seed: u64) -> PyResult<PyCode> {
    wrap(py.detach(|| constructions::random_code_nu(n, r, seed)))
}

#[pyfunction]
fn general_upper_code(n: u32, coradius: u32) -> PyResult<PyCode> {
    wrap(constructions::general_upper_code(n, coradius))
}

#[pyfunction]
fn direct_sum(a: &PyCode, b: &PyCode) -> PyResult<PyCode> {
    wrap(constructions::direct_sum(&a.inner, &b.inner))
}

#[pyfunction]
fn sphere_bound_symmetric(n: u32, r: u32) -> u64 {
    bounds::sphere_bound_symmetric(n, r)
}

#[pyfunction]
fn asym_sphere_bound(n: u32, r: u32) -> u64 {
    bounds::asym_sphere_bound(n, r)
}

#[pyfunction]
fn superdiag_lower(n: u32, r: u32) -> u64 {
    bounds::superdiag_lower(n, r)
}

#[pyfunction]
#[pyo3(signature = (n, r, node_limit=ip::DEFAULT_NODE_LIMIT))]
fn ip_plus(py: Python<'_>, n: u32, r: u32, node_limit: u64) -> PyResult<u64> {
    py.detach(|| ip::ip_plus_limited(n, r, node_limit))
        .map(|s| s.value)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, r, node_limit=ip::DEFAULT_NODE_LIMIT))]
fn ip_phi(py: Python<'_>, n: u32, r: u32, node_limit: u64) -> PyResult<u64> {
    py.detach(|| ip::ip_phi_limited(n, r, node_limit))
        .map(|s| s.value)
        .map_err(to_py)
}

/// Exact K+(n, R) for n <= 7: a dict with status, lower, upper, witness.
#[pyfunction]
#[pyo3(signature = (n, r, time_limit=None, node_limit=None))]
fn exact_kplus<'py>(
    py: Python<'py>,
    n: u32,
    r: u32,
    time_limit: Option<f64>,
    node_limit: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let limits = ExactLimits {
        time_limit: time_limit.map(Duration::from_secs_f64),
        node_limit,
    };
    let res = py.detach(|| exact::exact_kplus(n, r, limits)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", res.n)?;
    d.set_item("r", res.r)?;
    d.set_item(
        "status",
        match res.status {
            ExactStatus::Exact => "exact",
            ExactStatus::Bracket => "bracket",
        },
    )?;
    d.set_item("lower", res.lower)?;
    d.set_item("upper", res.upper)?;
    d.set_item("nodes", res.nodes)?;
    d.set_item("witness", PyCode { inner: res.witness })?;
    Ok(d)
}

/// Best bracket for K+(n, R) from the selected sources.
#[pyfunction]
#[pyo3(signature = (n, r, ip=false, greedy=false, exact=false, seed=0))]
fn best_bounds<'py>(
    py: Python<'py>,
    n: u32,
    r: u32,
    ip: bool,
    greedy: bool,
    exact: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let budget = Budget {
        ip,
        greedy,
        exact,
        seed,
        ..Budget::analytic()
    };
    let rec = py.detach(|| bounds::best_bounds(n, r, &budget)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", rec.n)?;
    d.set_item("r", rec.r)?;
    d.set_item("lower", rec.lower)?;
    d.set_item("upper", rec.upper)?;
    d.set_item("lower_tag", rec.lower_tag.as_str())?;
    d.set_item("upper_tag", rec.upper_tag.as_str())?;
    d.set_item("exact", rec.exact)?;
    Ok(d)
}

#[pyfunction]
fn k_plus(n: u32, r: u32) -> u32 {
    linear::k_plus(n, r)
}

/// Minimum dimension of a linear (n, R) code; exhaustive search needs n <= 6.
#[pyfunction]
#[pyo3(signature = (n, r, exhaustive=false))]
fn min_linear_dim(n: u32, r: u32, exhaustive: bool) -> PyResult<u32> {
    linear::min_linear_dim(n, r, exhaustive).map(|(k, _)| k).map_err(to_py)
}

/// The linear code A(n, R): its reduced basis and its span.
#[pyfunction]
fn a_code(n: u32, r: u32) -> PyResult<(Vec<String>, PyCode)> {
    let code = linear::a_code(n, r).map_err(to_py)?;
    let basis = code
        .basis()
        .iter()
        .map(|&w| codefile::to_bitstring(w, n))
        .collect();
    Ok((basis, PyCode { inner: code.code().clone().with_radius(r) }))
}

/// Adds every class and function of the extension to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(diagonal_code, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_code, m)?)?;
    m.add_function(wrap_pyfunction!(random_code_nu, m)?)?;
    m.add_function(wrap_pyfunction!(general_upper_code, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_bound_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(asym_sphere_bound, m)?)?;
    m.add_function(wrap_pyfunction!(superdiag_lower, m)?)?;
    m.add_function(wrap_pyfunction!(ip_plus, m)?)?;
    m.add_function(wrap_pyfunction!(ip_phi, m)?)?;
    m.add_function(wrap_pyfunction!(exact_kplus, m)?)?;
    m.add_function(wrap_pyfunction!(best_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(k_plus, m)?)?;
    m.add_function(wrap_pyfunction!(min_linear_dim, m)?)?;
    m.add_function(wrap_pyfunction!(a_code, m)?)?;
    Ok(())
}

#[pymodule]
fn asymcover_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
