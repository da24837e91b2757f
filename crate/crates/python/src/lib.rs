//! Python bindings. Structured results (reports, verdicts) come back as
//! plain dicts decoded from the same JSON the command line emits; ids
//! inside those dicts are decimal strings.

use std::path::PathBuf;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;
use qaseries::series::SeriesSigns;
use qaseries::store::{load, save_scanner};
use qaseries::{Bounds, Error, ScanOptions, SieveConfig};

create_exception!(pyqaseries, QaseriesError, PyException);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        Error::InvalidModulus(_) | Error::InvalidAssignment(_) | Error::Config(_) => {
            PyValueError::new_err(err.to_string())
        }
        other => QaseriesError::new_err(other.to_string()),
    }
}

fn as_dict<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| QaseriesError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn bounds(terms: Option<u64>, prime_bound: Option<u64>) -> Bounds {
    match (terms, prime_bound) {
        (None, None) => Bounds::terms(qaseries::series::DEFAULT_TERMS),
        (t, p) => Bounds {
            max_terms: t,
            prime_bound: p,
        },
    }
}

fn sieve() -> PyResult<SieveConfig> {
    SieveConfig::from_env().map_err(to_py)
}

/// One balanced sign assignment over the admissible residues of `e`.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyqaseries")]
#[derive(Clone, PartialEq, Eq)]
struct Alternative(qaseries::SignAssignment);

impl std::hash::Hash for Alternative {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.modulus(), self.0.id()).hash(state);
    }
}

#[pymethods]
impl Alternative {
    /// Select by canonical id (int) or sign string such as ``"-+"``.
    #[new]
    fn new(e: u64, selector: &Bound<'_, PyAny>) -> PyResult<Self> {
        let form = Arc::new(qaseries::enumerate_forms(e).map_err(to_py)?);
        let a = if let Ok(id) = selector.extract::<u128>() {
            qaseries::SignAssignment::from_id(form, id)
        } else {
            qaseries::SignAssignment::parse(form, &selector.extract::<String>()?)
        };
        a.map(Alternative).map_err(to_py)
    }

    #[staticmethod]
    fn canonical(e: u64) -> PyResult<Self> {
        let form = Arc::new(qaseries::enumerate_forms(e).map_err(to_py)?);
        qaseries::SignAssignment::canonical(form)
            .map(Alternative)
            .map_err(to_py)
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    #[getter]
    fn id(&self) -> u128 {
        self.0.id()
    }

    #[getter]
    fn signs(&self) -> String {
        self.0.sign_string()
    }

    #[getter]
    fn residues(&self) -> Vec<u64> {
        self.0.form().residues().to_vec()
    }

    fn negate(&self) -> Self {
        Alternative(self.0.negate())
    }

    /// +1 or -1 for an admissible residue, None otherwise.
    fn sign_of(&self, residue: u64) -> Option<i8> {
        self.0
            .sign_of(residue)
            .map(|s| if s.apply(1) > 0 { 1 } else { -1 })
    }

    fn __repr__(&self) -> String {
        format!(
            "Alternative(e={}, id={}, signs={:?})",
            self.0.modulus(),
            self.0.id(),
            self.0.sign_string()
        )
    }
}

/// Resumable scan of one plain series.
#[pyclass(module = "pyqaseries")]
struct Scan {
    inner: qaseries::Scanner,
}

#[pymethods]
impl Scan {
    #[new]
    #[pyo3(signature = (alternative, dump_prefix=None))]
    fn new(alternative: &Alternative, dump_prefix: Option<u64>) -> PyResult<Self> {
        let options = ScanOptions {
            record_crossings: true,
            dump_prefix,
        };
        let inner =
            qaseries::Scanner::new(SeriesSigns::Plain(alternative.0.clone()), options, sieve()?)
                .map_err(to_py)?;
        Ok(Scan { inner })
    }

    /// Load a checkpoint written by :meth:`save` or the command line.
    #[staticmethod]
    fn resume(path: PathBuf) -> PyResult<Self> {
        let inner = load(&path)
            .and_then(|cp| cp.into_scanner())
            .map_err(to_py)?;
        Ok(Scan { inner })
    }

    /// Advance to the given absolute bounds.
    #[pyo3(signature = (terms=None, prime_bound=None))]
    fn run(
        &mut self,
        py: Python<'_>,
        terms: Option<u64>,
        prime_bound: Option<u64>,
    ) -> PyResult<()> {
        let b = bounds(terms, prime_bound);
        let sc = &mut self.inner;
        py.detach(|| sc.run(&b)).map_err(to_py)
    }

    #[getter]
    fn terms(&self) -> u64 {
        self.inner.state().terms
    }

    #[getter]
    fn sum(&self) -> i128 {
        self.inner.state().sum
    }

    #[getter]
    fn zeros(&self) -> Vec<(u64, u64)> {
        self.inner
            .state()
            .zeros
            .iter()
            .map(|z| (z.n, z.prime))
            .collect()
    }

    fn report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let st = self.inner.state();
        as_dict(py, &self.inner.report(&Bounds::terms(st.terms)))
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        let terms = self.inner.state().terms;
        save_scanner(&self.inner, &Bounds::terms(terms), &path).map_err(to_py)
    }
}

#[pyfunction]
fn primes_upto(py: Python<'_>, limit: u64) -> PyResult<Vec<u64>> {
    let cfg = sieve()?;
    py.detach(|| qaseries::primes_upto(limit, &cfg))
        .map_err(to_py)
}

#[pyfunction]
fn enumerate_forms(e: u64) -> PyResult<Vec<u64>> {
    qaseries::enumerate_forms(e)
        .map(|f| f.residues().to_vec())
        .map_err(to_py)
}

/// Number of alternatives, exact for any size.
#[pyfunction]
fn count_alternatives(py: Python<'_>, e: u64) -> PyResult<Py<PyAny>> {
    let n = qaseries::count_alternatives(e).map_err(to_py)?;
    Ok(py
        .import("builtins")?
        .getattr("int")?
        .call1((n.to_string(),))?
        .unbind())
}

#[pyfunction]
#[pyo3(signature = (e, cap=qaseries::forms::DEFAULT_ALTERNATIVE_CAP))]
fn alternatives(e: u64, cap: u64) -> PyResult<Vec<Alternative>> {
    qaseries::enumerate_alternatives(e, cap)
        .map(|v| v.into_iter().map(Alternative).collect())
        .map_err(to_py)
}

#[pyfunction]
fn canonical(e: u64) -> PyResult<Alternative> {
    Alternative::canonical(e)
}

#[pyfunction]
fn partial_sums(py: Python<'_>, alternative: &Alternative, n: u64) -> PyResult<Vec<i128>> {
    let a = alternative.0.clone();
    py.detach(|| qaseries::partial_sums(&a, n)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (alternative, terms=None, prime_bound=None))]
fn find_zeros(
    py: Python<'_>,
    alternative: &Alternative,
    terms: Option<u64>,
    prime_bound: Option<u64>,
) -> PyResult<Vec<(u64, u64)>> {
    let (a, b) = (alternative.0.clone(), bounds(terms, prime_bound));
    let zeros = py.detach(|| qaseries::find_zeros(&a, &b)).map_err(to_py)?;
    Ok(zeros.iter().map(|z| (z.n, z.prime)).collect())
}

/// `(j, S_j, S_{j+1})` for every strict sign change.
#[pyfunction]
#[pyo3(signature = (alternative, terms=None, prime_bound=None))]
fn crossings(
    py: Python<'_>,
    alternative: &Alternative,
    terms: Option<u64>,
    prime_bound: Option<u64>,
) -> PyResult<Vec<(u64, i128, i128)>> {
    let (a, b) = (alternative.0.clone(), bounds(terms, prime_bound));
    let found = py.detach(|| qaseries::crossings(&a, &b)).map_err(to_py)?;
    Ok(found.iter().map(|c| (c.j, c.s_j, c.s_next)).collect())
}

#[pyfunction]
fn census(
    py: Python<'_>,
    e: u64,
    prime_bound: u64,
) -> PyResult<std::collections::BTreeMap<u64, u64>> {
    py.detach(|| qaseries::census(e, prime_bound))
        .map_err(to_py)
}

/// `(n, m_(n-1), m_n, S_(n-1))` at each requested index.
#[pyfunction]
fn table2_relations(
    alternative: &Alternative,
    at: Vec<u64>,
) -> PyResult<Vec<(u64, i128, i128, i128)>> {
    let rows = qaseries::table2_relations(&alternative.0, &at, None).map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| (r.n, r.previous_term, r.term, r.previous_sum))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (alternative, terms=None, prime_bound=None, dump_prefix=None))]
fn scan(
    py: Python<'_>,
    alternative: &Alternative,
    terms: Option<u64>,
    prime_bound: Option<u64>,
    dump_prefix: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let (a, b) = (alternative.0.clone(), bounds(terms, prime_bound));
    let options = ScanOptions {
        record_crossings: true,
        dump_prefix,
    };
    let rep = py
        .detach(|| qaseries::scan(&a, &b, options))
        .map_err(to_py)?;
    as_dict(py, &rep)
}

fn plan(window: Option<u64>, lengths: Option<Vec<u64>>) -> qaseries::SchedulePlan {
    let mut plan = qaseries::SchedulePlan::default();
    if let Some(lengths) = lengths {
        plan.mode = qaseries::ScheduleMode::Fixed { lengths };
    } else if let Some(window) = window {
        plan.mode = qaseries::ScheduleMode::Adaptive { window };
    }
    plan
}

/// Composed scan flipping between an alternative and its negation.
#[pyfunction]
#[pyo3(signature = (alternative, terms=None, prime_bound=None, window=None, lengths=None))]
fn infscan(
    py: Python<'_>,
    alternative: &Alternative,
    terms: Option<u64>,
    prime_bound: Option<u64>,
    window: Option<u64>,
    lengths: Option<Vec<u64>>,
) -> PyResult<Py<PyAny>> {
    let mode = plan(window, lengths).mode;
    let schedule =
        qaseries::BlockSchedule::flip_pair(mode, alternative.0.clone()).map_err(to_py)?;
    let b = bounds(terms, prime_bound);
    let rep = py
        .detach(|| qaseries::scan_composed(&schedule, &b, ScanOptions::default()))
        .map_err(to_py)?;
    as_dict(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (e, terms=None, prime_bound=None, window=None, verify_symmetry=false))]
fn classify(
    py: Python<'_>,
    e: u64,
    terms: Option<u64>,
    prime_bound: Option<u64>,
    window: Option<u64>,
    verify_symmetry: bool,
) -> PyResult<Py<PyAny>> {
    let mut cfg = qaseries::ClassifyConfig::new(bounds(terms, prime_bound));
    cfg.plan = plan(window, None);
    cfg.verify_symmetry = verify_symmetry;
    cfg.sieve = sieve()?;
    let v = py.detach(|| qaseries::classify(e, &cfg)).map_err(to_py)?;
    as_dict(py, &v)
}

#[pyfunction]
#[pyo3(signature = (start, end, terms=None, prime_bound=None, window=None))]
fn candidates(
    py: Python<'_>,
    start: u64,
    end: u64,
    terms: Option<u64>,
    prime_bound: Option<u64>,
    window: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let (b, p, s) = (bounds(terms, prime_bound), plan(window, None), sieve()?);
    let r = py
        .detach(|| qaseries::candidate_set(start, end, &b, &p, s))
        .map_err(to_py)?;
    as_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (a_max=5))]
fn identities(py: Python<'_>, a_max: u32) -> PyResult<Py<PyAny>> {
    let rows = qaseries::identity_report(a_max, qaseries::forms::DEFAULT_ALTERNATIVE_CAP)
        .map_err(to_py)?;
    as_dict(py, &rows)
}

#[pymodule]
fn pyqaseries(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QaseriesError", m.py().get_type::<QaseriesError>())?;
    m.add("ENGINE_VERSION", qaseries::ENGINE_VERSION)?;
    m.add_class::<Alternative>()?;
    m.add_class::<Scan>()?;
    m.add_function(wrap_pyfunction!(primes_upto, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_forms, m)?)?;
    m.add_function(wrap_pyfunction!(count_alternatives, m)?)?;
    m.add_function(wrap_pyfunction!(alternatives, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(partial_sums, m)?)?;
    m.add_function(wrap_pyfunction!(find_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(crossings, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(table2_relations, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(infscan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(candidates, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    Ok(())
}
