//! Python bindings for `secant_dyn`.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyIOError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use secant_dyn::basin::{self, BasinError, ParityOptions};
use secant_dyn::extrapolate::Schedule;
use secant_dyn::focal::{self, FocalError};
use secant_dyn::secmap::StepSignal;
use secant_dyn::{CurveSpec, OrbitLimits, PlanePoint, PolyError};

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn focal_err(e: FocalError) -> PyErr {
    match e {
        FocalError::Divergent { .. } | FocalError::SingularCurvature { .. } => {
            PyZeroDivisionError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

fn basin_err(e: BasinError) -> PyErr {
    match e {
        BasinError::Io { .. } | BasinError::Encode { .. } => PyIOError::new_err(e.to_string()),
        other => value_err(other),
    }
}

/// Real monic polynomial with validated real roots.
#[pyclass(name = "Polynomial", module = "secant_dyn_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPolynomial {
    inner: secant_dyn::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// From coefficients `a0, a1, ..., ak` (ascending, monic). Real roots are
    /// found numerically.
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        secant_dyn::Polynomial::from_coeffs(&coeffs)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    /// `Π (x - α)^d · residual(x)` from `[(α, d), ...]`.
    #[staticmethod]
    #[pyo3(signature = (factors, residual = Vec::new()))]
    fn factored(factors: Vec<(f64, usize)>, residual: Vec<f64>) -> PyResult<Self> {
        secant_dyn::Polynomial::from_factored(&factors, &residual)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    /// `"coeffs: a0 a1 ..."` or `"factored: (α d)... [r0 r1 ...]"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        secant_dyn::Polynomial::parse(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// `[(α, d), ...]` in ascending order of `α`.
    fn roots(&self) -> Vec<(f64, usize)> {
        self.inner
            .roots()
            .iter()
            .map(|r| (r.alpha(), r.multiplicity()))
            .collect()
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    /// Divided difference `q(x, y)`.
    fn q(&self, x: f64, y: f64) -> f64 {
        self.inner.q(x, y)
    }

    /// Numerator and denominator of the secant map's second coordinate.
    fn n_d(&self, x: f64, y: f64) -> (f64, f64) {
        self.inner.n_d(x, y)
    }

    /// `p^(m)(α) / m!`
    fn lambda_m(&self, alpha: f64, m: usize) -> f64 {
        self.inner.lambda_m(alpha, m)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }
}

/// Stopping rules for orbits.
#[pyclass(
    name = "OrbitLimits",
    module = "secant_dyn_py",
    get_all,
    set_all,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyOrbitLimits {
    max_iter: usize,
    conv_tol: f64,
    conv_streak: usize,
    escape_radius: f64,
    pole_guard: f64,
}

impl From<OrbitLimits> for PyOrbitLimits {
    fn from(l: OrbitLimits) -> Self {
        Self {
            max_iter: l.max_iter,
            conv_tol: l.conv_tol,
            conv_streak: l.conv_streak,
            escape_radius: l.escape_radius,
            pole_guard: l.pole_guard,
        }
    }
}

impl From<&PyOrbitLimits> for OrbitLimits {
    fn from(l: &PyOrbitLimits) -> Self {
        OrbitLimits {
            max_iter: l.max_iter,
            conv_tol: l.conv_tol,
            conv_streak: l.conv_streak,
            escape_radius: l.escape_radius,
            pole_guard: l.pole_guard,
        }
    }
}

#[pymethods]
impl PyOrbitLimits {
    #[new]
    #[pyo3(signature = (max_iter = None, conv_tol = None, conv_streak = None, escape_radius = None, pole_guard = None))]
    fn new(
        max_iter: Option<usize>,
        conv_tol: Option<f64>,
        conv_streak: Option<usize>,
        escape_radius: Option<f64>,
        pole_guard: Option<f64>,
    ) -> Self {
        let d = OrbitLimits::default();
        Self {
            max_iter: max_iter.unwrap_or(d.max_iter),
            conv_tol: conv_tol.unwrap_or(d.conv_tol),
            conv_streak: conv_streak.unwrap_or(d.conv_streak),
            escape_radius: escape_radius.unwrap_or(d.escape_radius),
            pole_guard: pole_guard.unwrap_or(d.pole_guard),
        }
    }

    /// Defaults used for basin rendering.
    #[staticmethod]
    fn basin() -> Self {
        OrbitLimits::basin().into()
    }

    fn __repr__(&self) -> String {
        format!(
            "OrbitLimits(max_iter={}, conv_tol={:e}, conv_streak={}, escape_radius={:e}, pole_guard={:e})",
            self.max_iter, self.conv_tol, self.conv_streak, self.escape_radius, self.pole_guard
        )
    }
}

fn limits_or(limits: Option<&PyOrbitLimits>, default: OrbitLimits) -> OrbitLimits {
    limits.map(OrbitLimits::from).unwrap_or(default)
}

/// One secant step from `(x, y)`. Raises `ZeroDivisionError` near the pole
/// set and `OverflowError` past the escape radius.
#[pyfunction]
#[pyo3(signature = (p, x, y, limits = None))]
fn step(p: &PyPolynomial, x: f64, y: f64, limits: Option<&PyOrbitLimits>) -> PyResult<(f64, f64)> {
    let lim = limits_or(limits, OrbitLimits::default());
    match secant_dyn::secant_step(&p.inner, PlanePoint::new(x, y), &lim) {
        Ok(pt) => Ok((pt.x, pt.y)),
        Err(StepSignal::NearPole { at }) => Err(PyZeroDivisionError::new_err(format!(
            "({}, {}) is on the pole set",
            at.x, at.y
        ))),
        Err(StepSignal::Escaped { to }) => Err(pyo3::exceptions::PyOverflowError::new_err(format!(
            "image ({:e}, {:e}) escaped",
            to.x, to.y
        ))),
    }
}

/// Result of iterating an orbit.
#[pyclass(name = "Orbit", module = "secant_dyn_py", get_all, frozen)]
pub struct PyOrbit {
    /// `"converged:i"`, `"escaped"`, `"near_pole"` or `"non_convergent"`.
    classification: String,
    /// Root index for converged orbits.
    root: Option<usize>,
    iterations: usize,
    trace: Option<Vec<(f64, f64)>>,
}

#[pymethods]
impl PyOrbit {
    fn __repr__(&self) -> String {
        format!("Orbit({}, iterations={})", self.classification, self.iterations)
    }
}

#[pyfunction]
#[pyo3(signature = (p, x, y, limits = None, trace = false))]
fn orbit(p: &PyPolynomial, x: f64, y: f64, limits: Option<&PyOrbitLimits>, trace: bool) -> PyOrbit {
    let lim = limits_or(limits, OrbitLimits::default());
    let r = secant_dyn::iterate_orbit(&p.inner, PlanePoint::new(x, y), &lim, trace);
    PyOrbit {
        classification: r.classification.to_string(),
        root: r.classification.root(),
        iterations: r.iterations,
        trace: r.trace.map(|t| t.iter().map(|pt| (pt.x, pt.y)).collect()),
    }
}

/// `[(x, y, kind, prefocal_x), ...]` with `kind` `"simple"` or `"non-simple"`.
#[pyfunction]
fn focal_points(p: &PyPolynomial) -> Vec<(f64, f64, &'static str, f64)> {
    secant_dyn::focal_points(&p.inner)
        .into_iter()
        .map(|f| {
            let kind = match f.kind {
                secant_dyn::FocalKind::Simple => "simple",
                secant_dyn::FocalKind::NonSimple => "non-simple",
            };
            (f.location.x, f.location.y, kind, f.prefocal_x)
        })
        .collect()
}

fn landing_map(p: &PyPolynomial, alpha: f64) -> PyResult<secant_dyn::LandingMap> {
    let root = p.inner.find_root(alpha).map_err(|e: PolyError| value_err(e))?;
    secant_dyn::LandingMap::new(root).map_err(focal_err)
}

/// Landing ordinate on `x = α` of the slope `-1` curve with curvature `kappa`
/// through `(α, α)`, for a root of even multiplicity.
#[pyfunction]
fn curvature_to_landing(p: &PyPolynomial, alpha: f64, kappa: f64) -> PyResult<f64> {
    focal::curvature_to_landing(&landing_map(p, alpha)?, kappa).map_err(focal_err)
}

#[pyfunction]
fn landing_to_curvature(p: &PyPolynomial, alpha: f64, y: f64) -> PyResult<f64> {
    focal::landing_to_curvature(&landing_map(p, alpha)?, y).map_err(focal_err)
}

/// Landing point of the slope 0 curve with curvature `kappa` through
/// `(alpha, beta)`, `alpha` a double root and `beta` a simple one.
#[pyfunction]
fn mixed_focal_landing(p: &PyPolynomial, alpha: f64, beta: f64, kappa: f64) -> PyResult<(f64, f64)> {
    focal::mixed_focal_landing(&p.inner, alpha, beta, kappa)
        .map(|pt| (pt.x, pt.y))
        .map_err(focal_err)
}

/// Limit of the map along a probe curve through `base`, by extrapolation.
/// Returns `(x, y, error_estimate)`.
#[pyfunction]
#[pyo3(signature = (p, base, slope, curvature = 0.0))]
fn numeric_curve_limit(
    p: &PyPolynomial,
    base: (f64, f64),
    slope: f64,
    curvature: f64,
) -> PyResult<(f64, f64, f64)> {
    let c = CurveSpec::new(PlanePoint::new(base.0, base.1), slope, curvature);
    focal::numeric_curve_limit(&p.inner, &c, &Schedule::default())
        .map(|l| (l.point.x, l.point.y, l.error))
        .map_err(focal_err)
}

/// Classified grid of seeds.
#[pyclass(name = "BasinGrid", module = "secant_dyn_py", frozen)]
pub struct PyBasinGrid {
    inner: secant_dyn::BasinGrid,
}

#[pymethods]
impl PyBasinGrid {
    #[getter]
    fn width(&self) -> usize {
        self.inner.window.width
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.window.height
    }

    /// Classification of the cell in column `col`, row `row` (row 0 at the top).
    fn cell(&self, col: usize, row: usize) -> PyResult<String> {
        let w = &self.inner.window;
        if col >= w.width || row >= w.height {
            return Err(pyo3::exceptions::PyIndexError::new_err(format!(
                "cell ({col}, {row}) outside a {}x{} grid",
                w.width, w.height
            )));
        }
        Ok(self.inner.cell(col, row).to_string())
    }

    fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        let c = self.inner.window.cell_center(col, row);
        (c.x, c.y)
    }

    fn histogram(&self) -> BTreeMap<String, usize> {
        self.inner
            .histogram()
            .into_iter()
            .map(|(c, n)| (c.to_string(), n))
            .collect()
    }

    fn ppm_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.ppm_bytes())
    }

    /// Writes PNG for a `.png` path, binary PPM otherwise.
    fn write(&self, path: std::path::PathBuf) -> PyResult<()> {
        basin::write_image(&self.inner, path).map_err(basin_err)
    }
}

/// Renders `window = (x_min, x_max, y_min, y_max)` at `size = (width, height)`.
#[pyfunction]
#[pyo3(signature = (p, window = (-3.0, 3.0, -3.0, 3.0), size = (300, 300), threads = None, limits = None))]
fn render(
    py: Python<'_>,
    p: &PyPolynomial,
    window: (f64, f64, f64, f64),
    size: (usize, usize),
    threads: Option<usize>,
    limits: Option<&PyOrbitLimits>,
) -> PyResult<PyBasinGrid> {
    let w =
        secant_dyn::Window::new(window.0, window.1, window.2, window.3, size.0, size.1).map_err(basin_err)?;
    let lim = limits_or(limits, OrbitLimits::basin());
    let threads =
        threads.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let inner = py
        .detach(|| basin::render_basin_with_threads(&p.inner, &w, &lim, threads))
        .map_err(basin_err)?;
    Ok(PyBasinGrid { inner })
}

/// Disc experiment around `(α, α)` for root `root_index`. Returns a dict with
/// `counts` (classification -> seeds), `fraction` and, for even
/// multiplicity, `witnesses` as `[(root_index, x, y, iterations), ...]`.
#[pyfunction]
#[pyo3(signature = (p, root_index, epsilon = 1e-3, n = 10_000, rng_seed = 0, quadrant_only = false, witnesses = true))]
#[allow(clippy::too_many_arguments)]
fn parity<'py>(
    py: Python<'py>,
    p: &PyPolynomial,
    root_index: usize,
    epsilon: f64,
    n: usize,
    rng_seed: u64,
    quadrant_only: bool,
    witnesses: bool,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let opts = ParityOptions {
        quadrant_only,
        witnesses,
        ..ParityOptions::default()
    };
    let r = py
        .detach(|| secant_dyn::parity_experiment(&p.inner, root_index, epsilon, n, rng_seed, &opts))
        .map_err(basin_err)?;
    let d = pyo3::types::PyDict::new(py);
    let counts: BTreeMap<String, usize> = r.counts.iter().map(|(c, n)| (c.to_string(), *n)).collect();
    d.set_item("counts", counts)?;
    d.set_item("fraction", r.fraction_to_root())?;
    d.set_item("alpha", r.alpha)?;
    d.set_item("multiplicity", r.multiplicity)?;
    let w: Vec<(usize, f64, f64, usize)> = r
        .witnesses
        .iter()
        .map(|w| (w.root, w.seed.x, w.seed.y, w.iterations))
        .collect();
    d.set_item("witnesses", w)?;
    Ok(d)
}

#[pymodule]
fn secant_dyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyOrbitLimits>()?;
    m.add_class::<PyOrbit>()?;
    m.add_class::<PyBasinGrid>()?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(focal_points, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_to_landing, m)?)?;
    m.add_function(wrap_pyfunction!(landing_to_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_focal_landing, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_curve_limit, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(parity, m)?)?;
    Ok(())
}
