//! Python module `superqubit_py`: Grassmann numbers, superqubit states,
//! their invariants and the algebra identity suite.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use superqubit::grassmann::{AlgebraContext, GrassmannNumber, VANISH_TOL};
use superqubit::invariants;
use superqubit::osp::{build_generators, Generator, OspParams};
use superqubit::parser;
use superqubit::states::{inner_product, SuperState};
use superqubit::sweep::{self, BetaGrid, Family};
use superqubit::verify;

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Element of a Grassmann algebra with `pairs` conjugate generator pairs.
#[pyclass(name = "Grassmann", module = "superqubit_py", from_py_object)]
#[derive(Clone)]
pub struct PyGrassmann {
    inner: GrassmannNumber,
}

impl From<GrassmannNumber> for PyGrassmann {
    fn from(inner: GrassmannNumber) -> Self {
        PyGrassmann { inner }
    }
}

#[pymethods]
impl PyGrassmann {
    #[new]
    #[pyo3(signature = (value, pairs = 1))]
    fn new(value: Complex64, pairs: usize) -> Self {
        GrassmannNumber::scalar(AlgebraContext::new(pairs), value).into()
    }

    /// The generator θ_index.
    #[staticmethod]
    #[pyo3(signature = (index, pairs = 1))]
    fn generator(index: usize, pairs: usize) -> PyResult<Self> {
        GrassmannNumber::generator(AlgebraContext::new(pairs), index).map(Into::into).map_err(value_error)
    }

    #[getter]
    fn body(&self) -> Complex64 {
        self.inner.body()
    }

    #[getter]
    fn pairs(&self) -> usize {
        self.inner.context().pair_count()
    }

    fn soul(&self) -> Self {
        self.inner.soul().into()
    }

    /// 0, 1, or None for mixed parity.
    fn parity(&self) -> Option<u8> {
        self.inner.parity()
    }

    fn superstar(&self) -> Self {
        self.inner.superstar().into()
    }

    fn star(&self) -> Self {
        self.inner.star().into()
    }

    fn inverse(&self) -> PyResult<Self> {
        self.inner.inverse().map(Into::into).map_err(value_error)
    }

    fn sqrt(&self) -> PyResult<Self> {
        self.inner.sqrt().map(Into::into).map_err(value_error)
    }

    fn exp(&self) -> Self {
        self.inner.exp().into()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    /// Monomial list as JSON text.
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_add(&other.inner).map(Into::into).map_err(value_error)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_sub(&other.inner).map(Into::into).map_err(value_error)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.inner.checked_mul(&other.inner).map(Into::into).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Grassmann({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Even n-superqubit state.
#[pyclass(name = "State", module = "superqubit_py", from_py_object)]
#[derive(Clone)]
pub struct PyState {
    inner: SuperState,
}

impl From<SuperState> for PyState {
    fn from(inner: SuperState) -> Self {
        PyState { inner }
    }
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (text, n = None))]
    fn new(text: &str, n: Option<usize>) -> PyResult<Self> {
        parse_state(text, n)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn coeff(&self, label: &str) -> PyResult<PyGrassmann> {
        self.inner.coeff_by_label(label).map(|c| c.clone().into()).map_err(value_error)
    }

    fn norm_squared(&self) -> PyGrassmann {
        self.inner.norm_squared().into()
    }

    fn is_physical(&self) -> bool {
        self.inner.is_physical()
    }

    fn normalize(&self) -> PyResult<Self> {
        self.inner.normalize().map(Into::into).map_err(value_error)
    }

    /// ⟨self|other⟩.
    fn inner_product(&self, other: &Self) -> PyResult<PyGrassmann> {
        inner_product(&self.inner, &other.inner).map(Into::into).map_err(value_error)
    }

    /// Applies P00, P01, P11, Q0 or Q1 on `slot`, counted from 0.
    fn act(&self, generator: &str, slot: usize) -> PyResult<Self> {
        let gen: Generator = generator.parse().map_err(value_error)?;
        build_generators(OspParams::OSP12).act(gen, slot, &self.inner).map(Into::into).map_err(value_error)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("State({:?})", self.inner.to_text())
    }
}

/// Parses a ket expression such as "(1/sqrt(2))(|00> + |11>)".
#[pyfunction]
#[pyo3(signature = (text, n = None))]
fn parse_state(text: &str, n: Option<usize>) -> PyResult<PyState> {
    parser::parse_state(text, n).map(Into::into).map_err(value_error)
}

/// Full covariant report as JSON text.
#[pyfunction]
#[pyo3(signature = (state, tol = VANISH_TOL))]
fn invariants_json(state: &PyState, tol: f64) -> PyResult<String> {
    invariants::analyze(&state.inner, tol).map(|r| r.to_json().to_string()).map_err(value_error)
}

/// SLOCC class label.
#[pyfunction]
#[pyo3(signature = (state, tol = VANISH_TOL))]
fn classify(state: &PyState, tol: f64) -> PyResult<&'static str> {
    invariants::classify_super(&state.inner, tol).map(|c| c.label()).map_err(value_error)
}

/// Quadratic two-superqubit invariant.
#[pyfunction]
fn sdet(state: &PyState) -> PyResult<PyGrassmann> {
    invariants::sdet(&state.inner).map(Into::into).map_err(value_error)
}

/// Quartic three-superqubit invariant.
#[pyfunction]
fn superhyperdet(state: &PyState) -> PyResult<PyGrassmann> {
    invariants::superhyperdet(&state.inner).map(Into::into).map_err(value_error)
}

/// (name, passed, detail) for every identity in the algebra suite.
#[pyfunction]
#[pyo3(signature = (seed = 1, cases = 100))]
fn verify_algebra(seed: u64, cases: usize) -> Vec<(String, bool, String)> {
    verify::run_suite(&build_generators(OspParams::OSP12), seed, cases)
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect()
}

/// (β, τ) rows for a family over "re0:re1:k[,im0:im1:k]".
#[pyfunction]
#[pyo3(signature = (family, alpha, beta_grid))]
fn sweep_family(family: &str, alpha: Complex64, beta_grid: &str) -> PyResult<Vec<(Complex64, f64)>> {
    let family: Family = family.parse().map_err(value_error)?;
    let grid: BetaGrid = beta_grid.parse().map_err(value_error)?;
    let rows = sweep::sweep(family, alpha, &grid).map_err(value_error)?;
    Ok(rows.into_iter().map(|r| (r.beta, r.tau)).collect())
}

#[pymodule]
pub fn superqubit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrassmann>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(parse_state, m)?)?;
    m.add_function(wrap_pyfunction!(invariants_json, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(sdet, m)?)?;
    m.add_function(wrap_pyfunction!(superhyperdet, m)?)?;
    m.add_function(wrap_pyfunction!(verify_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_family, m)?)?;
    Ok(())
}
