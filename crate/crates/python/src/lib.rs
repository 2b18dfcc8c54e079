//! Python bindings. Built as the `christoffel` extension module by maturin.
//!
//! Library errors surface as `ValueError`, except numeric breakdowns
//! (overflow, ill-conditioning, exhausted discretizations), which raise
//! `ArithmeticError`.

use christoffel_core::asymptotics::{clock_spacing, universality_scan};
use christoffel_core::kernel::{
    kernel_cd_circle, kernel_cd_circle_alt, kernel_diag_sum, kernel_direct_circle, kernel_real,
};
use christoffel_core::measures::{parse_measure_json, MeasureSource};
use christoffel_core::opuc::szego_recurrence;
use christoffel_core::oprl::stieltjes_recurrence;
use christoffel_core::quadrature::{gauss_rule, interlacing_check, markov_stieltjes, zeros_pn};
use christoffel_core::updates::{geronimus_update, jacobi_pointmass_diffs, wong_update};
use christoffel_core::{
    Anchor, AtomicMeasure, Complex64, Error, JacobiParams, NamedMeasure, SupportKind, VerblunskyParams,
};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    if e.is_numeric() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

/// Plain Python containers (dict, list, float) via the json module.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

const DEFAULT_RESOLUTION: usize = 1024;

/// A finite positive measure on the real line or the unit circle, held as
/// atoms. Analytic weights are discretized on construction.
#[pyclass(name = "Measure", module = "christoffel", from_py_object)]
#[derive(Clone)]
struct PyMeasure {
    inner: AtomicMeasure,
    named: Option<NamedMeasure>,
}

#[pymethods]
impl PyMeasure {
    /// `uniform`, `chebyshev2`, `jacobi(a,b)`, `uniform[lo,hi]`,
    /// `lebesgue_circle`, optionally followed by `+mass@point` terms.
    #[staticmethod]
    #[pyo3(signature = (name, resolution = DEFAULT_RESOLUTION))]
    fn named(name: &str, resolution: usize) -> PyResult<Self> {
        let m: NamedMeasure = name.parse().map_err(err)?;
        Ok(Self {
            inner: m.discretize(resolution).map_err(err)?,
            named: Some(m),
        })
    }

    /// Parses a JSON measure description.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let source = parse_measure_json(text).map_err(err)?;
        Ok(Self {
            inner: source.to_atomic().map_err(err)?,
            named: match source {
                MeasureSource::Named { measure, .. } => Some(measure),
                MeasureSource::Atomic(_) => None,
            },
        })
    }

    /// Finitely many atoms; with `circle` the points must lie on `|z| = 1`.
    #[staticmethod]
    #[pyo3(signature = (points, weights, circle = false))]
    fn atomic(points: Vec<Complex64>, weights: Vec<f64>, circle: bool) -> PyResult<Self> {
        if points.len() != weights.len() {
            return Err(PyValueError::new_err("points and weights differ in length"));
        }
        let support = if circle { SupportKind::UnitCircle } else { SupportKind::RealLine };
        Ok(Self {
            inner: AtomicMeasure::new(support, points.into_iter().zip(weights), "atomic").map_err(err)?,
            named: None,
        })
    }

    #[getter]
    fn support(&self) -> &'static str {
        match self.inner.support() {
            SupportKind::RealLine => "real",
            SupportKind::UnitCircle => "circle",
        }
    }

    #[getter]
    fn points(&self) -> Vec<Complex64> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Measure({:?}, atoms={})", self.inner.label(), self.inner.len())
    }

    /// A copy with an extra point mass.
    fn with_atom(&self, point: Complex64, mass: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_atom(point, mass).map_err(err)?,
            named: self.named.clone().map(|m| m.with_atom(point, mass)),
        })
    }

    #[pyo3(signature = (x, closed = true))]
    fn cdf(&self, x: f64, closed: bool) -> PyResult<f64> {
        self.inner.cdf(x, closed).map_err(err)
    }

    /// `m[j][k] = ∫ conj(z)^j z^k dμ` for `0 <= j, k <= n`.
    fn moments(&self, n: usize) -> Vec<Vec<Complex64>> {
        let m = self.inner.moments(n);
        (0..m.dim()).map(|j| (0..m.dim()).map(|k| m.get(j, k)).collect()).collect()
    }

    /// Jacobi coefficients through degree `n` (real-line measures).
    fn jacobi(&self, n: usize) -> PyResult<PyJacobi> {
        Ok(PyJacobi(stieltjes_recurrence(&self.inner, n).map_err(err)?))
    }

    /// Verblunsky coefficients `α_0..α_{n-1}` (circle measures).
    fn verblunsky(&self, n: usize) -> PyResult<PyVerblunsky> {
        Ok(PyVerblunsky(szego_recurrence(&self.inner, n).map_err(err)?))
    }
}

/// Jacobi parameters `a_1, a_2, …` and `b_1, b_2, …` with the mass of the
/// measure.
#[pyclass(name = "JacobiParams", module = "christoffel", from_py_object)]
#[derive(Clone)]
struct PyJacobi(JacobiParams);

#[pymethods]
impl PyJacobi {
    #[new]
    #[pyo3(signature = (a, b, mass0 = 1.0))]
    fn new(a: Vec<f64>, b: Vec<f64>, mass0: f64) -> PyResult<Self> {
        Ok(Self(JacobiParams::new(a, b, mass0).map_err(err)?))
    }

    /// `a_n = 1`, `b_n = 0`: the Chebyshev weight of the second kind on `[-2, 2]`.
    #[staticmethod]
    fn free(n: usize) -> Self {
        Self(JacobiParams::free(n))
    }

    #[getter]
    fn a(&self) -> Vec<f64> {
        self.0.a_slice().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<f64> {
        self.0.b_slice().to_vec()
    }

    #[getter]
    fn mass0(&self) -> f64 {
        self.0.mass0()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    fn __repr__(&self) -> String {
        format!("JacobiParams(max_degree={}, mass0={})", self.0.max_degree(), self.0.mass0())
    }

    /// `p_0(x)..p_n(x)`.
    fn orthonormal_values(&self, n: usize, x: f64) -> PyResult<Vec<f64>> {
        self.0.orthonormal_values(n, x).map_err(err)
    }

    /// `K_n(z, w)`, by the CD formula where it is well conditioned.
    fn kernel(&self, n: usize, z: Complex64, w: Complex64) -> PyResult<Complex64> {
        Ok(kernel_real(&self.0, n, z, w).map_err(err)?.value)
    }

    /// `K_n(x, x)`.
    fn kernel_diag(&self, n: usize, x: f64) -> PyResult<f64> {
        kernel_diag_sum(&self.0, n, x).map_err(err)
    }

    /// `λ_n(x) = 1 / K_n(x, x)`.
    fn christoffel_function(&self, n: usize, x: f64) -> PyResult<f64> {
        Ok(1.0 / kernel_diag_sum(&self.0, n, x).map_err(err)?)
    }

    /// Zeros of `p_n`, ascending.
    fn zeros(&self, n: usize) -> PyResult<Vec<f64>> {
        zeros_pn(&self.0, n).map_err(err)
    }

    /// Gauss rule of size `n` as a dict. With `shift = b` the nodes are the
    /// roots of `P_n - b P_{n-1}`; with `x0` the rule has `x0` as a node.
    #[pyo3(signature = (n, shift = None, x0 = None))]
    fn gauss_rule<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        shift: Option<f64>,
        x0: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let anchor = match (shift, x0) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give shift or x0, not both")),
            (_, Some(x)) => Anchor::Point(x),
            (b, None) => Anchor::CornerShift(b.unwrap_or(0.0)),
        };
        to_py(py, &gauss_rule(&self.0, n, anchor).map_err(err)?)
    }

    /// `(lower, upper)` bounds on `μ((-∞, x0))` and `μ((-∞, x0])`.
    fn markov_stieltjes(&self, n: usize, x0: f64) -> PyResult<(f64, f64)> {
        let b = markov_stieltjes(&self.0, n, x0).map_err(err)?;
        Ok((b.lower, b.upper))
    }

    /// Checks zero interlacing up to degree `n_max`; returns the number of
    /// conditions verified.
    fn interlacing_check(&self, n_max: usize) -> PyResult<usize> {
        Ok(interlacing_check(&self.0, n_max).map_err(err)?.checks)
    }
}

/// Verblunsky coefficients with the mass of the measure.
#[pyclass(name = "VerblunskyParams", module = "christoffel", from_py_object)]
#[derive(Clone)]
struct PyVerblunsky(VerblunskyParams);

#[pymethods]
impl PyVerblunsky {
    #[new]
    #[pyo3(signature = (alpha, mass0 = 1.0))]
    fn new(alpha: Vec<Complex64>, mass0: f64) -> PyResult<Self> {
        Ok(Self(VerblunskyParams::new(alpha, mass0).map_err(err)?))
    }

    #[getter]
    fn alpha(&self) -> Vec<Complex64> {
        self.0.alpha().to_vec()
    }

    #[getter]
    fn rho(&self) -> Vec<f64> {
        self.0.rho().to_vec()
    }

    #[getter]
    fn mass0(&self) -> f64 {
        self.0.mass0()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    fn __repr__(&self) -> String {
        format!("VerblunskyParams(max_degree={}, mass0={})", self.0.max_degree(), self.0.mass0())
    }

    /// `([φ_0..φ_n], [φ_0*..φ_n*])` at `z`.
    fn orthonormal_values(&self, n: usize, z: Complex64) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
        self.0.orthonormal_values(n, z).map_err(err)
    }

    /// `K_n(z, w)` by `route`: `"direct"`, `"cd"` or `"cd-alt"`.
    #[pyo3(signature = (n, z, w, route = "direct"))]
    fn kernel(&self, n: usize, z: Complex64, w: Complex64, route: &str) -> PyResult<Complex64> {
        let v = match route {
            "direct" => kernel_direct_circle(&self.0, n, z, w),
            "cd" => kernel_cd_circle(&self.0, n, z, w),
            "cd-alt" => kernel_cd_circle_alt(&self.0, n, z, w),
            other => return Err(PyValueError::new_err(format!("unknown route `{other}`"))),
        };
        Ok(v.map_err(err)?.value)
    }
}

/// Sine-kernel scan of `K_n` around `x0` on `grid × grid`.
#[pyfunction]
fn universality<'py>(
    py: Python<'py>,
    measure: &PyMeasure,
    x0: f64,
    n: usize,
    grid: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let jp = stieltjes_recurrence(&measure.inner, n + 1).map_err(err)?;
    let report = universality_scan(&jp, measure.named.as_ref(), &measure.inner, x0, n, &grid, &grid)
        .map_err(err)?;
    to_py(py, &report)
}

/// Rescaled spacings of the zeros of `p_n` nearest `x0`.
#[pyfunction]
#[pyo3(signature = (measure, x0, n, j = 5))]
fn clock<'py>(py: Python<'py>, measure: &PyMeasure, x0: f64, n: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
    let jp = stieltjes_recurrence(&measure.inner, n + 1).map_err(err)?;
    let report = clock_spacing(&jp, measure.named.as_ref(), &measure.inner, x0, n, j).map_err(err)?;
    to_py(py, &report)
}

/// Monic `X_n` before and after adding `lam δ_{z0}`.
#[pyfunction]
#[pyo3(signature = (measure, z0, lam, n, oracle = true))]
fn point_mass_update<'py>(
    py: Python<'py>,
    measure: &PyMeasure,
    z0: Complex64,
    lam: f64,
    n: usize,
    oracle: bool,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &geronimus_update(&measure.inner, z0, lam, n, oracle).map_err(err)?)
}

/// Verblunsky coefficients of `(μ + lam δ_{z0}) / (1 + lam)`.
#[pyfunction]
#[pyo3(signature = (measure, z0, lam, count, oracle = true))]
fn verblunsky_update<'py>(
    py: Python<'py>,
    measure: &PyMeasure,
    z0: Complex64,
    lam: f64,
    count: usize,
    oracle: bool,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &wong_update(&measure.inner, z0, lam, count, oracle).map_err(err)?)
}

/// Jacobi-parameter differences caused by a point mass at `x0`.
#[pyfunction]
fn jacobi_differences<'py>(
    py: Python<'py>,
    measure: &PyMeasure,
    x0: f64,
    lam: f64,
    n_max: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &jacobi_pointmass_diffs(&measure.inner, x0, lam, n_max).map_err(err)?)
}

/// Adds the classes and functions to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", christoffel_core::VERSION)?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyJacobi>()?;
    m.add_class::<PyVerblunsky>()?;
    m.add_function(wrap_pyfunction!(universality, m)?)?;
    m.add_function(wrap_pyfunction!(clock, m)?)?;
    m.add_function(wrap_pyfunction!(point_mass_update, m)?)?;
    m.add_function(wrap_pyfunction!(verblunsky_update, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_differences, m)?)?;
    Ok(())
}

#[pymodule]
fn christoffel(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
