//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers; errors become `ValueError`, or `ArithmeticError` when a
//! numerical routine fails to converge.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use povmkit::arcs::ArcSet;
use povmkit::effect::{real_unit_vector, Effect, ToleranceConfig};
use povmkit::linalg::{ComplexMatrix, ComplexVector};
use povmkit::measure::{cantor_effect_norm, BorelDescriptor, FatCantorModel};
use povmkit::phase::{canonical_norm_scan, covariance_check, phase_effect, GramKernel, Truncation};
use povmkit::phase_space::{angle_margin_norm1_probe, Axis};
use povmkit::povm::PartitionPovm;
use povmkit::tcs::{self, TcsParams};

fn err(e: povmkit::Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rows_of(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn kernel(kind: &str, s: usize, t: usize, z: Complex64) -> PyResult<GramKernel> {
    match kind {
        "canonical" => Ok(GramKernel::Canonical),
        "trivial" => Ok(GramKernel::Trivial),
        "elementary" => GramKernel::elementary(s, t, z).map_err(err),
        other => Err(PyValueError::new_err(format!("unknown kernel '{other}'"))),
    }
}

/// A validated effect `0 <= A <= I`.
#[pyclass(name = "Effect", frozen, from_py_object)]
#[derive(Clone)]
struct PyEffect(Effect);

#[pymethods]
impl PyEffect {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = ComplexMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Effect::validate(m, &ToleranceConfig::default()).map(Self).map_err(err)
    }

    #[staticmethod]
    fn diagonal(values: Vec<f64>) -> PyResult<Self> {
        Effect::from_diagonal(&values, &ToleranceConfig::default()).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows_of(self.0.matrix())
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues().to_vec()
    }

    fn norm(&self) -> f64 {
        self.0.operator_norm()
    }

    fn complement(&self) -> Self {
        Self(self.0.complement())
    }

    fn sqrt(&self) -> PyResult<Self> {
        self.0.sqrt().map(Self).map_err(err)
    }

    fn is_regular(&self) -> PyResult<bool> {
        self.0.is_regular().map_err(err)
    }

    /// Infimum of `A` and `I - A`, or `None` when it does not exist.
    fn infimum_with_complement(&self) -> PyResult<Option<Self>> {
        Ok(self.0.infimum_with_complement().map_err(err)?.map(Self))
    }

    /// `(λ, λP[φ])` for a real amplitude vector `φ` (normalized here).
    fn glb_with_rank1(&self, phi: Vec<f64>) -> PyResult<(f64, Self)> {
        let v: ComplexVector = real_unit_vector(&phi).map_err(err)?;
        let (l, c) = self.0.glb_with_rank1(&v).map_err(err)?;
        Ok((l, Self(c)))
    }

    fn __repr__(&self) -> String {
        format!("Effect(dim={}, eigenvalues={:?})", self.0.dim(), self.0.eigenvalues())
    }
}

/// Finite union of arcs of the circle.
#[pyclass(name = "ArcSet", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyArcSet(ArcSet);

#[pymethods]
impl PyArcSet {
    #[new]
    fn new(arcs: Vec<(f64, f64)>) -> PyResult<Self> {
        ArcSet::new(arcs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        ArcSet::parse(s, false).map(Self).map_err(err)
    }

    #[staticmethod]
    fn full() -> Self {
        Self(ArcSet::full())
    }

    fn arcs(&self) -> Vec<(f64, f64)> {
        self.0.arcs().to_vec()
    }

    fn length(&self) -> f64 {
        self.0.length()
    }

    fn complement(&self) -> Self {
        Self(self.0.complement())
    }

    fn shift(&self, x: f64) -> Self {
        Self(self.0.shift(x))
    }

    fn fourier(&self, k: i64) -> Complex64 {
        self.0.fourier(k)
    }

    fn __repr__(&self) -> String {
        format!("ArcSet({:?})", self.0.arcs())
    }
}

/// Truncated phase effect `E(X)` for a named Gram kernel.
#[pyfunction]
#[pyo3(name = "phase_effect", signature = (arcs, d, kind = "canonical", s = 0, t = 1, z = Complex64::new(0.5, 0.0)))]
fn phase_effect_py(arcs: &PyArcSet, d: usize, kind: &str, s: usize, t: usize, z: Complex64) -> PyResult<PyEffect> {
    let g = kernel(kind, s, t, z)?;
    phase_effect(&g, &arcs.0, Truncation::new(d).map_err(err)?).map(PyEffect).map_err(err)
}

/// `(d, norm, log10(1 - norm))` for the canonical phase effect.
#[pyfunction]
fn canonical_norms(arcs: &PyArcSet, dims: Vec<usize>) -> PyResult<Vec<(usize, f64, f64)>> {
    let scan = canonical_norm_scan(&arcs.0, &dims).map_err(err)?;
    Ok(scan.iter().map(|s| (s.d, s.norm(), s.log10_deficit())).collect())
}

#[pyfunction]
#[pyo3(signature = (arcs, shift, d, kind = "canonical"))]
fn phase_covariance(arcs: &PyArcSet, shift: f64, d: usize, kind: &str) -> PyResult<f64> {
    let g = kernel(kind, 0, 1, Complex64::new(0.5, 0.0))?;
    covariance_check(&g, &arcs.0, shift, Truncation::new(d).map_err(err)?).map_err(err)
}

/// `(amplitude, dim, probability, deficit)` rows of the angle-margin probe.
#[pyfunction]
#[pyo3(signature = (arcs, theta0, amplitudes, d = None))]
fn angle_probe(arcs: &PyArcSet, theta0: f64, amplitudes: Vec<f64>, d: Option<usize>) -> PyResult<Vec<(f64, usize, f64, f64)>> {
    let rows = angle_margin_norm1_probe(&arcs.0, theta0, &amplitudes, d).map_err(err)?;
    Ok(rows.iter().map(|r| (r.amplitude, r.dim, r.probability, r.deficit)).collect())
}

/// Norm-1 and regularity flags of the POM generated by a list of effects.
#[pyfunction]
fn povm_flags(effects: Vec<PyEffect>) -> PyResult<(bool, bool)> {
    let cfg = ToleranceConfig::default();
    let pom = PartitionPovm::from_effects(effects.into_iter().map(|e| e.0).collect(), &cfg).map_err(err)?;
    Ok((pom.has_norm1_property().map_err(err)?, pom.is_regular_povm().map_err(err)?))
}

/// Two-photon coherent state `|β; μ, ν>` with `|μ|² - |ν|² = 1`.
#[pyclass(name = "TcsParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTcs(TcsParams);

#[pymethods]
impl PyTcs {
    #[new]
    fn new(beta: Complex64, mu: Complex64, nu: Complex64) -> PyResult<Self> {
        TcsParams::new(beta, mu, nu).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_w(beta: Complex64, w: Complex64) -> PyResult<Self> {
        TcsParams::from_w(beta, w).map(Self).map_err(err)
    }

    #[staticmethod]
    fn coherent(beta: Complex64) -> Self {
        Self(TcsParams::coherent(beta))
    }

    fn overlap(&self, z: Complex64) -> Complex64 {
        tcs::tcs_overlap(&self.0, z)
    }

    fn q_density(&self, z: Complex64) -> f64 {
        tcs::q_density(&self.0, z)
    }

    fn angle_density(&self, theta: f64) -> f64 {
        tcs::angle_density(&self.0, theta)
    }

    /// `(Var x, Var y)` of the Cartesian margins.
    fn variances(&self) -> (f64, f64) {
        (tcs::marginal_variance(&self.0, Axis::X), tcs::marginal_variance(&self.0, Axis::Y))
    }

    fn uncertainty_product(&self) -> f64 {
        tcs::uncertainty_product(&self.0)
    }
}

/// `(norm, outside bracket, inside bracket)` in the fat-Cantor model.
#[pyfunction]
#[pyo3(signature = (set, depth = 24))]
fn cantor_norm(set: &str, depth: u32) -> PyResult<(f64, (f64, f64), (f64, f64))> {
    let model = FatCantorModel::new(depth).map_err(err)?;
    let x = BorelDescriptor::parse(set).map_err(err)?;
    let n = cantor_effect_norm(&model, &x).map_err(err)?;
    Ok((n.norm, n.outside, n.inside))
}

#[pymodule]
fn povmkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEffect>()?;
    m.add_class::<PyArcSet>()?;
    m.add_class::<PyTcs>()?;
    m.add_function(wrap_pyfunction!(phase_effect_py, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_norms, m)?)?;
    m.add_function(wrap_pyfunction!(phase_covariance, m)?)?;
    m.add_function(wrap_pyfunction!(angle_probe, m)?)?;
    m.add_function(wrap_pyfunction!(povm_flags, m)?)?;
    m.add_function(wrap_pyfunction!(cantor_norm, m)?)?;
    Ok(())
}
