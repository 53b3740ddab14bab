//! Python bindings. Reports come back as plain dicts.

use fatplane_core::bounds::{self, BoundReport};
use fatplane_core::combinatorics::{self, Multidegree};
use fatplane_core::field::{PrimeField, DEFAULT_MODULUS};
use fatplane_core::verifiers::{self, ExperimentReport};
use fatplane_core::{report, Error};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(fatplane, FatplaneError, PyException);
create_exception!(fatplane, UsageError, PyValueError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Usage(_) => UsageError::new_err(e.to_string()),
        other => FatplaneError::new_err(other.to_string()),
    }
}

fn dd(degrees: Vec<u32>) -> PyResult<Multidegree> {
    Multidegree::new(degrees).map_err(err)
}

fn field(p: u64) -> PyResult<PrimeField> {
    PrimeField::new(p).map_err(err)
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| FatplaneError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Binomial coefficient, zero when `q > p` or `p < 0`.
#[pyfunction]
fn binom(p: i64, q: i64) -> PyResult<BigInt> {
    combinatorics::binom(p, q).map_err(err)
}

/// Dimension of the degree-`d` part of the fat plane's coordinate ring.
#[pyfunction]
fn h0_fat(r: u32, t: u32, d: i64) -> PyResult<BigInt> {
    combinatorics::h0_fat(r, t, d).map_err(err)
}

/// Expected dimension breakdown: rho, flag_dim, c, c_per_degree.
#[pyfunction]
fn rho_expected<'py>(
    py: Python<'py>,
    n: u32,
    r: u32,
    t: u32,
    degrees: Vec<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &combinatorics::rho_expected(n, r, t, &dd(degrees)?).map_err(err)?,
    )
}

#[pyfunction]
fn conjecture_bound(r: u32, degrees: Vec<u32>) -> PyResult<BigInt> {
    Ok(bounds::conjecture_bound(r, &dd(degrees)?))
}

#[pyfunction]
fn elv_bound(r: u32, degrees: Vec<u32>) -> PyResult<BigInt> {
    Ok(bounds::elv_bound(r, &dd(degrees)?).n)
}

#[pyfunction]
fn small_step_min_n(r: u32, degrees: Vec<u32>) -> PyResult<BigInt> {
    Ok(bounds::small_step_min_n(r, &dd(degrees)?).n)
}

#[pyfunction]
fn covering_condition<'py>(
    py: Python<'py>,
    n: u32,
    r: u32,
    degrees: Vec<u32>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &bounds::covering_condition(n, r, &dd(degrees)?).map_err(err)?,
    )
}

/// Bound report for `r`-cycles on complete intersections of the given type.
#[pyclass(name = "BoundReport", module = "fatplane", frozen)]
struct PyBoundReport(BoundReport);

#[pymethods]
impl PyBoundReport {
    #[getter]
    fn conjecture_n(&self) -> BigInt {
        self.0.conjecture_n.clone()
    }
    #[getter]
    fn elv_n(&self) -> BigInt {
        self.0.elv_n.clone()
    }
    #[getter]
    fn small_step_n(&self) -> BigInt {
        self.0.small_step_n.clone()
    }
    #[getter]
    fn best_n(&self) -> Option<BigInt> {
        self.0.best_n.clone()
    }
    #[getter]
    fn strategy(&self) -> Vec<String> {
        self.0
            .strategy
            .iter()
            .map(|s| {
                serde_json::to_value(s)
                    .expect("tag")
                    .as_str()
                    .expect("tag")
                    .to_string()
            })
            .collect()
    }
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }
    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("plain data")
    }
    fn __repr__(&self) -> String {
        format!(
            "BoundReport(r={}, dd={}, best_n={:?})",
            self.0.r,
            self.0.dd,
            self.0.best_n.as_ref().map(|n| n.to_string())
        )
    }
}

#[pyfunction]
#[pyo3(signature = (r, degrees, conjectural = false))]
fn best_bound(r: u32, degrees: Vec<u32>, conjectural: bool) -> PyResult<PyBoundReport> {
    Ok(PyBoundReport(bounds::best_bound(
        r,
        &dd(degrees)?,
        conjectural,
    )))
}

/// Outcome of a verification experiment.
#[pyclass(name = "ExperimentReport", module = "fatplane", frozen)]
struct PyExperimentReport(ExperimentReport);

#[pymethods]
impl PyExperimentReport {
    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }
    #[getter]
    fn trials(&self) -> u64 {
        self.0.trials
    }
    #[getter]
    fn successes(&self) -> u64 {
        self.0.successes
    }
    #[getter]
    fn verdict(&self) -> String {
        serde_json::to_value(self.0.verdict)
            .expect("tag")
            .as_str()
            .expect("tag")
            .to_string()
    }
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed()
    }
    #[getter]
    fn metrics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.metrics)
    }
    #[getter]
    fn witness<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.witness)
    }
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }
    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("plain data")
    }
    fn __repr__(&self) -> String {
        format!(
            "ExperimentReport(name={:?}, {}/{}, verdict={})",
            self.0.name,
            self.0.successes,
            self.0.trials,
            self.verdict()
        )
    }
}

fn report(r: fatplane_core::Result<ExperimentReport>) -> PyResult<PyExperimentReport> {
    r.map(PyExperimentReport).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, r, t, d, p = DEFAULT_MODULUS))]
fn verify_codim(n: u32, r: u32, t: u32, d: u32, p: u64) -> PyResult<PyExperimentReport> {
    report(verifiers::verify_codim(n, r, t, d, field(p)?))
}

#[pyfunction]
#[pyo3(signature = (r, t, degrees, p_count, p = DEFAULT_MODULUS, trials = 20, seed = 1, informational = false))]
#[allow(clippy::too_many_arguments)]
fn maxrank_mc(
    r: u32,
    t: u32,
    degrees: Vec<u32>,
    p_count: u32,
    p: u64,
    trials: u64,
    seed: u64,
    informational: bool,
) -> PyResult<PyExperimentReport> {
    report(verifiers::maxrank_mc(
        r,
        t,
        &dd(degrees)?,
        p_count,
        field(p)?,
        trials,
        seed,
        informational,
    ))
}

#[pyfunction]
#[pyo3(signature = (r, degrees, p_count = None))]
fn lastineg_check(r: u32, degrees: Vec<u32>, p_count: Option<u32>) -> PyResult<PyExperimentReport> {
    let dd = dd(degrees)?;
    let p_count = p_count.unwrap_or_else(|| verifiers::minimal_p_count(r, &dd));
    report(verifiers::lastineg_check(r, &dd, p_count))
}

#[pyfunction]
#[pyo3(signature = (n, r, t, degrees, p = DEFAULT_MODULUS, trials = 20, seed = 1))]
fn tangent_rank_mc(
    n: u32,
    r: u32,
    t: u32,
    degrees: Vec<u32>,
    p: u64,
    trials: u64,
    seed: u64,
) -> PyResult<PyExperimentReport> {
    report(verifiers::tangent_rank_mc(
        n,
        r,
        t,
        &dd(degrees)?,
        field(p)?,
        trials,
        seed,
    ))
}

#[pyfunction]
#[pyo3(signature = (p = DEFAULT_MODULUS, trials = 100, seed = 1))]
fn quadric_exception(p: u64, trials: u64, seed: u64) -> PyResult<PyExperimentReport> {
    report(verifiers::quadric_exception(field(p)?, trials, seed))
}

#[pyfunction]
fn rho_prime_identity(n: u32, r: u32, degrees: Vec<u32>) -> PyResult<PyExperimentReport> {
    report(verifiers::rho_prime_identity(n, r, &dd(degrees)?))
}

#[pyfunction]
#[pyo3(signature = (n, degrees, p = 7, max_extension = 1, seed = 1))]
fn fat_point_search(
    n: u32,
    degrees: Vec<u32>,
    p: u64,
    max_extension: u32,
    seed: u64,
) -> PyResult<PyExperimentReport> {
    report(verifiers::fat_point_search(
        n,
        &dd(degrees)?,
        field(p)?,
        max_extension,
        seed,
    ))
}

/// The published-examples table as a dict with a `rows` list.
#[pyfunction]
#[pyo3(signature = (r = 5, degrees = vec![20, 30]))]
fn paper_examples<'py>(py: Python<'py>, r: u32, degrees: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &report::paper_examples(r, &dd(degrees)?).map_err(err)?)
}

#[pymodule]
fn fatplane(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("FatplaneError", py.get_type::<FatplaneError>())?;
    m.add("UsageError", py.get_type::<UsageError>())?;
    m.add("DEFAULT_MODULUS", DEFAULT_MODULUS)?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyExperimentReport>()?;
    m.add_function(wrap_pyfunction!(binom, m)?)?;
    m.add_function(wrap_pyfunction!(h0_fat, m)?)?;
    m.add_function(wrap_pyfunction!(rho_expected, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_bound, m)?)?;
    m.add_function(wrap_pyfunction!(elv_bound, m)?)?;
    m.add_function(wrap_pyfunction!(small_step_min_n, m)?)?;
    m.add_function(wrap_pyfunction!(covering_condition, m)?)?;
    m.add_function(wrap_pyfunction!(best_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_codim, m)?)?;
    m.add_function(wrap_pyfunction!(maxrank_mc, m)?)?;
    m.add_function(wrap_pyfunction!(lastineg_check, m)?)?;
    m.add_function(wrap_pyfunction!(tangent_rank_mc, m)?)?;
    m.add_function(wrap_pyfunction!(quadric_exception, m)?)?;
    m.add_function(wrap_pyfunction!(rho_prime_identity, m)?)?;
    m.add_function(wrap_pyfunction!(fat_point_search, m)?)?;
    m.add_function(wrap_pyfunction!(paper_examples, m)?)?;
    Ok(())
}
