//! Python bindings. Reports come back as plain dicts and lists.

#![allow(clippy::too_many_arguments)]

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use symdyn::config::SystemConfig;
use symdyn::entrolab::blocks::lemma_table as lemma_table_rs;
use symdyn::entrolab::{cover_entropy as cover_entropy_rs, parse_measure, sft_entropy, MarkovMeasure};
use symdyn::error::ErrorKind;
use symdyn::exact::{parse_rational, Rational};
use symdyn::recfam::{
    bohr_membership, classify_sft, matrix_coefficient as matrix_coefficient_rs, n_set as n_set_rs,
    rotation_recurrence as rotation_recurrence_rs, weyl_average as weyl_average_rs, BohrSpec, QuadraticReal,
    SequenceSpec,
};
use symdyn::symcore::{parse_cover, parse_union};
use symdyn::towers::{kr_two_heights, nest_tower};
use symdyn::varprin::{attain_cover_entropy, evaluate_h_check, universal_rohlin as universal_rohlin_rs, GoodPointOptions};
use symdyn::{Caps, Word};

create_exception!(symdyn_py, SymdynError, PyException);
create_exception!(symdyn_py, ValidationError, SymdynError);
create_exception!(symdyn_py, CapExceededError, SymdynError);
create_exception!(symdyn_py, PreconditionError, SymdynError);

fn err(e: symdyn::Error) -> PyErr {
    let msg = e.to_string();
    match e.kind() {
        ErrorKind::Validation => ValidationError::new_err(msg),
        ErrorKind::Resource => CapExceededError::new_err(msg),
        ErrorKind::Precondition => PreconditionError::new_err(msg),
    }
}

fn invalid(msg: impl Into<String>) -> PyErr {
    ValidationError::new_err(msg.into())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| SymdynError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).ok_or_else(|| invalid(format!("not a rational: {s:?}")))
}

fn caps(cap_states: Option<u64>) -> Caps {
    let mut c = Caps::default();
    if let Some(s) = cap_states {
        c.states = s;
    }
    c
}

/// A subshift given by finite data.
#[pyclass(unsendable, module = "symdyn_py")]
struct Subshift {
    inner: symdyn::Subshift,
    describe: String,
}

#[pymethods]
impl Subshift {
    /// Builds from TOML text, e.g. `type = "sft"\nalphabet = 2\nforbidden = ["11"]`.
    #[staticmethod]
    #[pyo3(signature = (text, cap_states=None))]
    fn from_config(text: &str, cap_states: Option<u64>) -> PyResult<Self> {
        let c = SystemConfig::parse(text).map_err(err)?;
        let inner = c.build(caps(cap_states)).map_err(err)?;
        Ok(Subshift { inner, describe: format!("{:?}", c.kind).to_lowercase() })
    }

    #[staticmethod]
    fn full(ell: usize) -> PyResult<Self> {
        Ok(Subshift { inner: symdyn::Subshift::full(ell).map_err(err)?, describe: format!("full({ell})") })
    }

    #[staticmethod]
    fn sft(ell: usize, forbidden: Vec<String>) -> PyResult<Self> {
        let words: Vec<&str> = forbidden.iter().map(String::as_str).collect();
        let inner = symdyn::Subshift::sft_str(ell, &words).map_err(err)?;
        Ok(Subshift { inner, describe: format!("sft({ell}, {forbidden:?})") })
    }

    #[staticmethod]
    fn golden_mean() -> Self {
        Subshift { inner: symdyn::Subshift::golden_mean(), describe: "golden_mean".into() }
    }

    #[staticmethod]
    fn period_two() -> Self {
        Subshift { inner: symdyn::Subshift::period_two(), describe: "period_two".into() }
    }

    #[staticmethod]
    fn morse() -> Self {
        Subshift { inner: symdyn::Subshift::morse(), describe: "morse".into() }
    }

    #[getter]
    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn is_sft(&self) -> bool {
        self.inner.is_sft()
    }

    fn count_words(&self, n: usize) -> PyResult<u128> {
        self.inner.count_words(n).map_err(err)
    }

    fn language(&self, n: usize) -> PyResult<Vec<String>> {
        Ok(self.inner.language(n).map_err(err)?.iter().map(|w| w.to_string()).collect())
    }

    fn is_admissible(&self, word: &str) -> PyResult<bool> {
        let w = Word::parse(word).map_err(err)?;
        self.inner.is_admissible(&w.0).map_err(err)
    }

    /// Log of the spectral radius of the presentation graph.
    fn sft_entropy(&self) -> PyResult<f64> {
        sft_entropy(&self.inner).map_err(err)
    }

    #[pyo3(signature = (cover="generating", n_max=12))]
    fn cover_entropy(&self, py: Python<'_>, cover: &str, n_max: usize) -> PyResult<Py<PyAny>> {
        let u = parse_cover(&self.inner, cover).map_err(err)?;
        to_py(py, &cover_entropy_rs(&self.inner, &u, n_max).map_err(err)?)
    }

    /// `N(U, V)` on `[-h, h]` for cylinder unions such as `"0"` or `"@2:01 + 1"`.
    fn n_set(&self, u: &str, v: &str, h: i64) -> PyResult<Vec<i64>> {
        let x = &self.inner;
        let u = parse_union(x.ell(), u, x.caps()).map_err(err)?;
        let v = parse_union(x.ell(), v, x.caps()).map_err(err)?;
        Ok(n_set_rs(x, &u, &v, h).map_err(err)?.members())
    }

    #[pyo3(signature = (horizon=64))]
    fn classify(&self, py: Python<'_>, horizon: i64) -> PyResult<Py<PyAny>> {
        to_py(py, &classify_sft(&self.inner, horizon).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Subshift({})", self.describe)
    }
}

/// A Markov measure on a subshift: `parry`, `uniform`, `perturb:t`,
/// `bernoulli:p0,p1`, `graph:row;row` or `periodic:word`.
#[pyclass(unsendable, module = "symdyn_py")]
struct Measure {
    inner: MarkovMeasure,
}

#[pymethods]
impl Measure {
    #[new]
    fn new(x: &Subshift, spec: &str) -> PyResult<Self> {
        Ok(Measure { inner: parse_measure(&x.inner, spec).map_err(err)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    /// `μ([w])` as a float.
    fn measure(&self, word: &str) -> PyResult<f64> {
        Ok(self.inner.measure_f64(&Word::parse(word).map_err(err)?.0))
    }

    /// `μ([w])` as an exact fraction string, when the chain is rational.
    fn exact_measure(&self, word: &str) -> PyResult<Option<String>> {
        let w = Word::parse(word).map_err(err)?;
        Ok(self.inner.measure::<Rational>(&w.0).map(|r| r.to_string()))
    }

    fn entropy(&self) -> f64 {
        self.inner.entropy()
    }

    /// Centered correlations of the indicator of `f` for `0 ≤ n ≤ n_max`.
    fn matrix_coefficient(&self, py: Python<'_>, f: &str, n_max: usize) -> PyResult<Py<PyAny>> {
        let ell = self.inner.ell();
        let f = parse_union(ell, f, &Caps::default()).map_err(err)?;
        to_py(py, &matrix_coefficient_rs(&self.inner, &f, n_max).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Measure({})", self.inner.label())
    }
}

#[pyfunction]
#[pyo3(signature = (ell, n_lo, n_hi, k, h, eps, cap_states=None))]
fn lemma_table(
    py: Python<'_>,
    ell: usize,
    n_lo: usize,
    n_hi: usize,
    k: usize,
    h: f64,
    eps: f64,
    cap_states: Option<u64>,
) -> PyResult<Py<PyAny>> {
    to_py(py, &lemma_table_rs(ell, n_lo, n_hi, k, h, eps, &caps(cap_states)).map_err(err)?)
}

/// `ȟ`, `ĥ` and `h_top` of a cover plus an entropy-attaining empirical measure.
#[pyfunction]
#[pyo3(signature = (x, measures, cover="generating", resolution=2, n_max=10, schedule=vec![(1, 64), (2, 1024)], tol=0.05, seed=0))]
fn variational(
    py: Python<'_>,
    x: &Subshift,
    measures: Vec<PyRef<'_, Measure>>,
    cover: &str,
    resolution: usize,
    n_max: usize,
    schedule: Vec<(usize, usize)>,
    tol: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let u = parse_cover(&x.inner, cover).map_err(err)?;
    let fam: Vec<MarkovMeasure> = measures.iter().map(|m| m.inner.clone()).collect();
    let check = evaluate_h_check(&x.inner, &u, &fam, resolution, n_max, tol).map_err(err)?;
    let opts = GoodPointOptions { seed, ..GoodPointOptions::default() };
    let attain = attain_cover_entropy(&x.inner, &u, &schedule, &opts, tol).map_err(err)?;
    to_py(py, &serde_json::json!({"h_check": check, "attain": attain}))
}

/// Universal Rohlin tower of height `n` with error `delta` (a fraction string).
#[pyfunction]
#[pyo3(signature = (x, n, delta, measures, resolution=None))]
fn universal_rohlin(
    py: Python<'_>,
    x: &Subshift,
    n: usize,
    delta: &str,
    measures: Vec<PyRef<'_, Measure>>,
    resolution: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let fam: Vec<MarkovMeasure> = measures.iter().map(|m| m.inner.clone()).collect();
    to_py(py, &universal_rohlin_rs(&x.inner, n, &rational(delta)?, &fam, resolution).map_err(err)?)
}

/// Two-height Kakutani-Rohlin tower; with `nest`, also the nested tower of
/// heights in `[nest, nest + 4n]`.
#[pyfunction]
#[pyo3(signature = (x, mu, n, nest=None, resolution=None))]
fn kr_tower(
    py: Python<'_>,
    x: &Subshift,
    mu: &Measure,
    n: usize,
    nest: Option<usize>,
    resolution: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let t = kr_two_heights(&x.inner, &mu.inner, n, resolution).map_err(err)?;
    match nest {
        None => to_py(py, &t),
        Some(m) => {
            let d = nest_tower(&x.inner, &t, m).map_err(err)?;
            to_py(py, &serde_json::json!({"inner": t, "nested": d}))
        }
    }
}

/// `(1/n) Σ exp(2πi α s_k)` with `α` in turns (`"sqrt2m1"`, `"3*sqrt(5)/2"`, ...).
#[pyfunction]
#[pyo3(signature = (alpha, n, seq="squares"))]
fn weyl_average(py: Python<'_>, alpha: &str, n: usize, seq: &str) -> PyResult<Py<PyAny>> {
    let s = SequenceSpec::parse(seq).map_err(err)?;
    let a = QuadraticReal::parse(alpha).map_err(err)?;
    to_py(py, &weyl_average_rs(&s, &a, n, &Caps::default()).map_err(err)?)
}

/// First `j` with `‖s_j α‖ < eps`.
#[pyfunction]
#[pyo3(signature = (alpha, eps, seq="squares", max_terms=10_000))]
fn rotation_recurrence(py: Python<'_>, alpha: &str, eps: &str, seq: &str, max_terms: usize) -> PyResult<Py<PyAny>> {
    let s = SequenceSpec::parse(seq).map_err(err)?;
    let a = QuadraticReal::parse(alpha).map_err(err)?;
    to_py(py, &rotation_recurrence_rs(&a, &rational(eps)?, &s, max_terms).map_err(err)?)
}

/// Members of `{n ∈ [-h, h] : ‖n α_i‖ < eps for all i}`.
#[pyfunction]
fn bohr_set(freqs: Vec<String>, eps: &str, h: i64) -> PyResult<Vec<i64>> {
    let f = freqs.iter().map(|s| QuadraticReal::parse(s)).collect::<symdyn::Result<Vec<_>>>().map_err(err)?;
    let spec = BohrSpec::new(f, rational(eps)?).map_err(err)?;
    Ok(bohr_membership(&spec, h, &Caps::default()).map_err(err)?.set.members())
}

#[pymodule]
fn symdyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", symdyn::VERSION)?;
    m.add("SymdynError", m.py().get_type::<SymdynError>())?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add("PreconditionError", m.py().get_type::<PreconditionError>())?;
    m.add_class::<Subshift>()?;
    m.add_class::<Measure>()?;
    m.add_function(wrap_pyfunction!(lemma_table, m)?)?;
    m.add_function(wrap_pyfunction!(variational, m)?)?;
    m.add_function(wrap_pyfunction!(universal_rohlin, m)?)?;
    m.add_function(wrap_pyfunction!(kr_tower, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_average, m)?)?;
    m.add_function(wrap_pyfunction!(rotation_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(bohr_set, m)?)?;
    Ok(())
}
