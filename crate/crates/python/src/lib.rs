//! Python bindings: representations, duals, Wold data and certifier reports.
//!
//! Matrices cross the boundary as lists of rows of Python `complex` (real
//! numbers are accepted). Reports are lists of dicts.

use num_complex::Complex64;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use covrep::cli::run_batteries;
use covrep::duality::{cauchy_dual, dagger_power, dual_identity_suite, is_n_dagger, mp_inverse};
use covrep::fuzz::{run_fuzz, FuzzSpec};
use covrep::io::{rep_from_json, rep_to_json};
use covrep::linalg::{self, ComplexMatrix, Subspace};
use covrep::properties::{is_concave_full, is_concave_mod, is_hyponormal, is_hyponormal_mod, theorem_suite};
use covrep::random::{random_rep, RepKind};
use covrep::report::{Check, CheckReport, PropertyVerdict};
use covrep::shift::{build_shift, zero_at, ShiftKind, WeightedShiftSpec};
use covrep::structure::{generalized_range, is_bi_regular, is_regular, projection_sequence, wold_report};
use covrep::{CovariantRep, CovrepError, Config};

type Rows = Vec<Vec<Complex64>>;

fn err(e: CovrepError) -> PyErr {
    match e {
        CovrepError::SizeCap { .. } => PyMemoryError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn config(tol: Option<f64>) -> PyResult<Config> {
    let cfg = Config::from_env().map_err(err)?;
    match tol {
        Some(t) => cfg.with_tol(t).map_err(err),
        None => Ok(cfg),
    }
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    if rows.is_empty() {
        return Err(PyValueError::new_err("matrix needs at least one row"));
    }
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn basis_rows(s: &Subspace) -> Rows {
    to_rows(s.basis())
}

fn check_dict<'py>(py: Python<'py>, c: &Check) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", &c.name)?;
    d.set_item("anchor", &c.anchor)?;
    d.set_item("kind", format!("{:?}", c.kind).to_lowercase())?;
    d.set_item("verdict", c.verdict.to_string())?;
    d.set_item("passed", c.passed())?;
    d.set_item("falsification", c.is_falsification())?;
    d.set_item("margin", c.margin)?;
    d.set_item("tolerance", c.tolerance)?;
    d.set_item("detail", &c.detail)?;
    d.set_item("witness", c.witness.clone())?;
    Ok(d)
}

fn report_list<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyList>> {
    let list = PyList::empty(py);
    for c in &r.checks {
        list.append(check_dict(py, c)?)?;
    }
    Ok(list)
}

fn verdict_dict<'py>(py: Python<'py>, v: &PropertyVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("holds", v.holds())?;
    d.set_item("margin", v.margin)?;
    d.set_item("tolerance", v.tolerance)?;
    d.set_item("domain_dim", v.domain_dim)?;
    d.set_item("witness", v.witness.clone())?;
    Ok(d)
}

/// A covariant representation given by `Ṽ: C^n ⊗ C^h → C^h`.
#[pyclass(name = "Rep", module = "covrep_py", from_py_object)]
#[derive(Clone)]
struct PyRep {
    inner: CovariantRep,
}

#[pymethods]
impl PyRep {
    #[new]
    fn new(dim_h: usize, n: usize, v_tilde: Rows) -> PyResult<Self> {
        let inner = CovariantRep::new(dim_h, n, to_matrix(v_tilde)?).map_err(err)?;
        Ok(PyRep { inner })
    }

    /// Parse the hex-float JSON interchange format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRep {
            inner: rep_from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        rep_to_json(&self.inner, serde_json::Value::Null)
    }

    #[getter]
    fn dim_h(&self) -> usize {
        self.inner.dim_h()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn v_tilde(&self) -> Rows {
        to_rows(self.inner.v_tilde())
    }

    fn power(&self, k: usize) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.power(k, &Config::default()).map_err(err)?))
    }

    fn lift(&self, k: usize) -> PyResult<Rows> {
        Ok(to_rows(&self.inner.lift(k, &Config::default()).map_err(err)?))
    }

    /// Moore-Penrose inverse `Ṽ†`.
    #[pyo3(signature = (tol = None))]
    fn pinv(&self, tol: Option<f64>) -> PyResult<Rows> {
        Ok(to_rows(&mp_inverse(&self.inner, &config(tol)?).map_err(err)?))
    }

    /// `k`-th power of `Ṽ†` in the sense of the generalized powers.
    #[pyo3(signature = (k, tol = None))]
    fn dagger_power(&self, k: usize, tol: Option<f64>) -> PyResult<Rows> {
        Ok(to_rows(&dagger_power(&self.inner, k, &config(tol)?).map_err(err)?))
    }

    /// Cauchy dual `Ṽ′ = Ṽ(Ṽ*Ṽ)†`.
    #[pyo3(signature = (tol = None))]
    fn cauchy_dual(&self, tol: Option<f64>) -> PyResult<PyRep> {
        Ok(PyRep {
            inner: cauchy_dual(&self.inner, &config(tol)?).map_err(err)?,
        })
    }

    #[pyo3(signature = (tol = None))]
    fn is_regular(&self, tol: Option<f64>) -> PyResult<bool> {
        Ok(is_regular(&self.inner, &config(tol)?).map_err(err)?.regular)
    }

    #[pyo3(signature = (tol = None))]
    fn is_bi_regular(&self, tol: Option<f64>) -> PyResult<bool> {
        Ok(is_bi_regular(&self.inner, &config(tol)?).map_err(err)?.bi_regular)
    }

    #[pyo3(signature = (k, tol = None))]
    fn is_n_dagger(&self, k: usize, tol: Option<f64>) -> PyResult<(bool, f64)> {
        let d = is_n_dagger(&self.inner, k, &config(tol)?).map_err(err)?;
        Ok((d.holds, d.residual))
    }

    /// Orthonormal basis of `R^∞(Ṽ)` as rows of basis columns.
    #[pyo3(signature = (tol = None))]
    fn generalized_range(&self, tol: Option<f64>) -> PyResult<Rows> {
        let cfg = config(tol)?;
        Ok(basis_rows(&generalized_range(&self.inner, cfg.k_max, &cfg).map_err(err)?.space))
    }

    /// Wold data: dimensions, bases and verdicts.
    #[pyo3(signature = (tol = None))]
    fn wold<'py>(&self, py: Python<'py>, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let w = wold_report(&self.inner, &config(tol)?).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("wandering", basis_rows(&w.wandering))?;
        d.set_item("brackets", basis_rows(&w.brackets))?;
        d.set_item("gen_range", basis_rows(&w.gen_range))?;
        d.set_item("dims", (w.wandering.dim(), w.brackets.dim(), w.gen_range.dim()))?;
        d.set_item("stabilized_at", w.stabilized_at)?;
        d.set_item("bi_regular", w.bi_regular)?;
        d.set_item("extended_wold", w.extended_wold)?;
        d.set_item("checks", report_list(py, &w.report)?)?;
        Ok(d)
    }

    /// Quadratic-form certifier: `hyponormal`, `concave` or `concave-full`,
    /// optionally modulo the kernel.
    #[pyo3(signature = (name, modulo_kernel = true, tol = None))]
    fn property<'py>(&self, py: Python<'py>, name: &str, modulo_kernel: bool, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
        let cfg = config(tol)?;
        let v = match (name, modulo_kernel) {
            ("hyponormal", true) => is_hyponormal_mod(&self.inner, None, &cfg),
            ("hyponormal", false) => is_hyponormal(&self.inner, &cfg),
            ("concave", _) => is_concave_mod(&self.inner, None, &cfg),
            ("concave-full", _) => is_concave_full(&self.inner, None, &cfg),
            _ => return Err(PyValueError::new_err(format!("unknown property {name:?}"))),
        }
        .map_err(err)?;
        verdict_dict(py, &v)
    }

    /// Duality identities, each with its residual.
    #[pyo3(signature = (tol = None))]
    fn duality_suite<'py>(&self, py: Python<'py>, tol: Option<f64>) -> PyResult<Bound<'py, PyList>> {
        report_list(py, &dual_identity_suite(&self.inner, None, &config(tol)?).map_err(err)?.report)
    }

    /// Projections `P_k` onto `R(Ṽ_k)` paired with their checks.
    #[pyo3(signature = (tol = None))]
    fn projection_checks<'py>(&self, py: Python<'py>, tol: Option<f64>) -> PyResult<Bound<'py, PyList>> {
        report_list(py, &projection_sequence(&self.inner, &config(tol)?).map_err(err)?.1)
    }

    #[pyo3(signature = (tol = None))]
    fn theorem_suite<'py>(&self, py: Python<'py>, tol: Option<f64>) -> PyResult<Bound<'py, PyList>> {
        report_list(py, &theorem_suite(&self.inner, None, &config(tol)?).map_err(err)?)
    }

    /// Run a certifier battery: `all`, `duality`, `structure` or `properties`.
    #[pyo3(signature = (battery = "all", tol = None))]
    fn check<'py>(&self, py: Python<'py>, battery: &str, tol: Option<f64>) -> PyResult<Bound<'py, PyList>> {
        if !matches!(battery, "all" | "duality" | "structure" | "properties") {
            return Err(PyValueError::new_err(format!("unknown battery {battery:?}")));
        }
        report_list(py, &run_batteries(&self.inner, battery, None, None, &config(tol)?).map_err(err)?)
    }

    fn direct_sum(&self, other: &PyRep) -> PyResult<PyRep> {
        Ok(PyRep {
            inner: self.inner.direct_sum(&other.inner).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Rep(dim_h={}, n={})", self.inner.dim_h(), self.inner.n())
    }
}

/// Truncated weighted shift on an index window `(a, b)`.
///
/// `weights` is either `None` (unit weights), `"dirichlet"`, or an `n`-row
/// list of `b − a + 1` weights.
#[pyfunction]
#[pyo3(signature = (kind, n, window, weights = None, zero = None))]
fn weighted_shift(
    kind: &str,
    n: usize,
    window: (i64, i64),
    weights: Option<&Bound<'_, PyAny>>,
    zero: Option<i64>,
) -> PyResult<PyRep> {
    let kind = match kind {
        "unilateral" => ShiftKind::Unilateral,
        "bilateral" => ShiftKind::Bilateral,
        other => return Err(PyValueError::new_err(format!("unknown shift kind {other:?}"))),
    };
    let spec = match weights {
        None => WeightedShiftSpec::unit(kind, n, window),
        Some(w) => match w.extract::<String>() {
            Ok(s) if s == "dirichlet" => WeightedShiftSpec::dirichlet(kind, n, window),
            Ok(s) => return Err(PyValueError::new_err(format!("unknown weight family {s:?}"))),
            Err(_) => WeightedShiftSpec::new(kind, n, window, w.extract::<Vec<Vec<f64>>>()?),
        },
    }
    .map_err(err)?;
    let spec = match zero {
        Some(m) => zero_at(&spec, m).map_err(err)?,
        None => spec,
    };
    let real = build_shift(&spec, &Config::default()).map_err(err)?;
    Ok(PyRep { inner: real.rep })
}

/// Seeded random representation of the given kind.
#[pyfunction]
#[pyo3(signature = (seed, dim_h, n, kind = "dense"))]
fn random(seed: u64, dim_h: usize, n: usize, kind: &str) -> PyResult<PyRep> {
    let kind: RepKind = kind.parse().map_err(err)?;
    Ok(PyRep {
        inner: random_rep(seed, dim_h, n, kind, &Config::default()).map_err(err)?,
    })
}

/// Moore-Penrose inverse of a plain matrix.
#[pyfunction]
fn pinv(m: Rows) -> PyResult<Rows> {
    Ok(to_rows(&linalg::pinv(&to_matrix(m)?, None).map_err(err)?))
}

/// Seeded fuzz run; returns verdict counts and falsifying trial indices.
#[pyfunction]
#[pyo3(signature = (trials, seed = 0, jobs = None))]
fn fuzz<'py>(py: Python<'py>, trials: usize, seed: u64, jobs: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let spec = FuzzSpec::new(trials, seed);
    let cfg = config(None)?;
    let out = py.detach(|| run_fuzz(&spec, jobs, &cfg)).map_err(err)?;
    let c = out.counts();
    let d = PyDict::new(py);
    d.set_item("pass", c.pass)?;
    d.set_item("fail", c.fail)?;
    d.set_item("falsifications", c.falsifications)?;
    d.set_item("hypothesis_failed", c.hypothesis_failed)?;
    d.set_item("not_applicable", c.not_applicable)?;
    d.set_item("falsifying_trials", out.failing_trials().map(|t| t.trial).collect::<Vec<_>>())?;
    d.set_item("n_dagger_findings", out.n_dagger_findings())?;
    Ok(d)
}

#[pymodule]
pub fn covrep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRep>()?;
    m.add_function(wrap_pyfunction!(weighted_shift, m)?)?;
    m.add_function(wrap_pyfunction!(random, m)?)?;
    m.add_function(wrap_pyfunction!(pinv, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    m.add("__version__", covrep::io::TOOL_VERSION)?;
    Ok(())
}
