//! Python bindings for the `cohmix` coherence/mixedness toolkit.
//!
//! The module mirrors the Rust API: a `DensityMatrix` class carrying the
//! validated state (construction fails on non-Hermitian, non-unit-trace, or
//! non-PSD input, exactly as in Rust), a `TransformPlan` class for
//! coherence- and mixedness-preserving maps, and free functions for the
//! reference families, sampling, scans, and the constrained optimizers.
//!
//! Matrices cross the boundary as nested lists: entries are Python
//! `complex` (plain floats and ints are accepted on input), so
//! `DensityMatrix([[0.5, 0.5], [0.5, 0.5]])` builds the maximally coherent
//! qubit. Validation failures raise `ValueError` with the same
//! `Name: message` text the CLI prints; file problems raise `OSError`.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cohmix::measures::{measure_report, measure_report_with_numeric_geometric, MeasureReport};
use cohmix::mcms::{mcms_from_mixedness, mcms_state, McmsParams};
use cohmix::optimizer::OptimizerConfig;
use cohmix::sampler::SeededRng;
use cohmix::state::{apply_unitary, dephase, maximally_coherent_pure, maximally_mixed};
use cohmix::transforms::{self, MajorizationOrder, TransformPlan};
use cohmix::{fidelity, gellmann, ComplexMatrix, Error};

fn err_to_py(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.name());
    match e {
        Error::Io(_) => PyIOError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(err_to_py)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let d = m.dim();
    (0..d)
        .map(|i| (0..d).map(|j| m.entry(i, j)).collect())
        .collect()
}

fn config(restarts: usize, seed: u64, tolerance: f64, max_iterations: usize) -> OptimizerConfig {
    OptimizerConfig {
        restarts,
        seed,
        tolerance,
        max_iterations,
        ..OptimizerConfig::default()
    }
}

fn report_to_dict<'py>(py: Python<'py>, r: &MeasureReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("dim", r.dim)?;
    d.set_item("c_l1", r.c_l1)?;
    d.set_item("c_rel_entropy", r.c_rel_entropy)?;
    d.set_item("c_geometric", r.c_geometric)?;
    d.set_item("m_linear", r.m_linear)?;
    d.set_item("m_von_neumann", r.m_von_neumann)?;
    d.set_item("m_geometric", r.m_geometric)?;
    d.set_item("tradeoff_residual", r.tradeoff_residual)?;
    Ok(d)
}

/// A validated density matrix in the fixed reference basis.
#[pyclass(name = "DensityMatrix", frozen)]
struct PyDensityMatrix {
    inner: cohmix::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Builds a state from a nested list of entries (row-major); entries may
    /// be `complex`, `float`, or `int`. Raises `ValueError` unless the matrix
    /// is Hermitian, unit-trace, and positive semidefinite.
    #[new]
    fn new(entries: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let m = matrix_from_rows(&entries)?;
        let inner = cohmix::make_state(m).map_err(err_to_py)?;
        Ok(Self { inner })
    }

    /// Parses the JSON form produced by `to_json` (and by the CLI).
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let inner = cohmix::DensityMatrix::from_json_str(s).map_err(err_to_py)?;
        Ok(Self { inner })
    }

    /// Reconstructs a state from generator-basis (Bloch) coordinates, the
    /// inverse of `bloch_vector`; the length must be `d*d - 1` for some `d`.
    #[staticmethod]
    fn from_bloch(components: Vec<f64>) -> PyResult<Self> {
        let m = gellmann::from_bloch(&components).map_err(err_to_py)?;
        let inner = cohmix::make_state(m).map_err(err_to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entry(&self, row: usize, col: usize) -> PyResult<Complex64> {
        let d = self.inner.dim();
        if row >= d || col >= d {
            return Err(PyIndexError::new_err(format!(
                "entry ({row}, {col}) out of range for dimension {d}"
            )));
        }
        Ok(self.inner.entry(row, col))
    }

    /// The matrix as a nested list of `complex` (row-major).
    fn entries(&self) -> Vec<Vec<Complex64>> {
        matrix_to_rows(self.inner.as_complex_matrix())
    }

    /// `Tr ρ²`.
    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    /// Eigenvalues sorted ascending.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum()
    }

    /// `S(ρ) = -Tr ρ ln ρ`, in nats.
    fn von_neumann_entropy(&self) -> f64 {
        cohmix::state::von_neumann_entropy(&self.inner)
    }

    /// The state with all off-diagonal entries removed.
    fn dephase(&self) -> Self {
        Self {
            inner: dephase(&self.inner),
        }
    }

    /// `U ρ U†` for a unitary given as a nested list.
    fn apply_unitary(&self, unitary: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let u = matrix_from_rows(&unitary)?;
        let inner = apply_unitary(&self.inner, &u).map_err(err_to_py)?;
        Ok(Self { inner })
    }

    /// Generator-basis (Bloch) coordinates, length `d² - 1`.
    fn bloch_vector(&self) -> PyResult<Vec<f64>> {
        let x = gellmann::to_bloch(&self.inner).map_err(err_to_py)?;
        Ok(x.components().to_vec())
    }

    /// All coherence and mixedness measures as a dict.
    ///
    /// `c_geometric` is populated for qubits (closed form) or, for any
    /// dimension, when `numeric_geometric=True` runs the fidelity maximizer
    /// over incoherent states with the given optimizer settings; otherwise
    /// it is `None`.
    #[pyo3(signature = (numeric_geometric=false, restarts=16, seed=0, tolerance=1e-7))]
    fn measures<'py>(
        &self,
        py: Python<'py>,
        numeric_geometric: bool,
        restarts: usize,
        seed: u64,
        tolerance: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let report = if numeric_geometric {
            let cfg = config(restarts, seed, tolerance, OptimizerConfig::default().max_iterations);
            measure_report_with_numeric_geometric(&self.inner, &cfg)
        } else {
            measure_report(&self.inner)
        }
        .map_err(err_to_py)?;
        report_to_dict(py, &report)
    }

    /// Serializes to the on-disk JSON form (12 significant digits).
    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dim={}, purity={:.6})",
            self.inner.dim(),
            self.inner.purity()
        )
    }
}

/// A coherence- or mixedness-preserving map: a convex mixture of unitary
/// conjugations (`kind == "MixedUnitary"`) or a single similarity
/// (`kind == "Similarity"`).
#[pyclass(name = "TransformPlan", frozen)]
struct PyTransformPlan {
    inner: TransformPlan,
}

#[pymethods]
impl PyTransformPlan {
    /// Parses the JSON form produced by `to_json` (and by the CLI); the plan
    /// is revalidated (weights form a distribution, components are unitary).
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let inner = TransformPlan::from_json_str(s).map_err(err_to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    /// Reconstruction error against the target the plan was built for.
    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// The `(weight, unitary)` pairs of the plan.
    fn components(&self) -> Vec<(f64, Vec<Vec<Complex64>>)> {
        self.inner
            .components
            .iter()
            .map(|c| (c.weight, matrix_to_rows(&c.unitary)))
            .collect()
    }

    /// `Σ w_k U_k ρ U_k†`, revalidated as a state.
    fn apply(&self, state: &PyDensityMatrix) -> PyResult<PyDensityMatrix> {
        let inner = transforms::apply_plan(&self.inner, &state.inner).map_err(err_to_py)?;
        Ok(PyDensityMatrix { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "TransformPlan(kind='{}', components={}, residual={:.3e})",
            self.inner.kind.as_str(),
            self.inner.components.len(),
            self.inner.residual
        )
    }
}

/// The maximally-coherent-mixed state of dimension `dim` with purity
/// parameter `p ∈ [0, 1]`: `(1-p)/d · I + p |ψ⟩⟨ψ|` with `|ψ⟩` the uniform
/// superposition.
#[pyfunction]
fn mcms(dim: usize, p: f64) -> PyResult<PyDensityMatrix> {
    let params = McmsParams::new(dim, p).map_err(err_to_py)?;
    Ok(PyDensityMatrix {
        inner: mcms_state(&params),
    })
}

/// The member of the maximally-coherent-mixed family with the given linear
/// mixedness `m ∈ [0, 1]` (solves `m = 1 - p²`).
#[pyfunction]
fn mcms_at_mixedness(dim: usize, mixedness: f64) -> PyResult<PyDensityMatrix> {
    let params = mcms_from_mixedness(dim, mixedness).map_err(err_to_py)?;
    Ok(PyDensityMatrix {
        inner: mcms_state(&params),
    })
}

/// The pure state `|ψ⟩⟨ψ|` with `|ψ⟩` the uniform superposition.
#[pyfunction]
fn maximally_coherent(dim: usize) -> PyDensityMatrix {
    PyDensityMatrix {
        inner: maximally_coherent_pure(dim),
    }
}

/// `I/d`.
#[pyfunction]
fn maximally_mixed_state(dim: usize) -> PyDensityMatrix {
    PyDensityMatrix {
        inner: maximally_mixed(dim),
    }
}

/// A Hilbert-Schmidt-distributed random state (Ginibre construction with
/// `k` ancilla columns, default `k = dim`). Same seed, same state.
#[pyfunction]
#[pyo3(signature = (dim, k=None, seed=0))]
fn ginibre_state(dim: usize, k: Option<usize>, seed: u64) -> PyResult<PyDensityMatrix> {
    let mut rng = SeededRng::new(seed);
    let inner =
        cohmix::sampler::ginibre_state(dim, k.unwrap_or(dim), &mut rng).map_err(err_to_py)?;
    Ok(PyDensityMatrix { inner })
}

/// A Haar-distributed random unitary as a nested list. Same seed, same
/// matrix.
#[pyfunction]
#[pyo3(signature = (dim, seed=0))]
fn haar_unitary(dim: usize, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    let mut rng = SeededRng::new(seed);
    let u = cohmix::sampler::haar_unitary(dim, &mut rng).map_err(err_to_py)?;
    Ok(matrix_to_rows(&u))
}

/// Samples `n` random states and returns `(mixedness, coherence/(d-1))`
/// pairs for the trade-off scan. Deterministic in `seed` and independent of
/// thread count.
#[pyfunction]
#[pyo3(signature = (dim, n, k=None, seed=0))]
fn scan(dim: usize, n: usize, k: Option<usize>, seed: u64) -> PyResult<Vec<(f64, f64)>> {
    let rng = SeededRng::new(seed);
    let points = cohmix::sampler::scan(dim, n, k.unwrap_or(dim), &rng).map_err(err_to_py)?;
    Ok(points
        .into_iter()
        .map(|p| (p.mixedness, p.scaled_coherence))
        .collect())
}

/// Uhlmann fidelity `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`.
#[pyfunction(name = "fidelity")]
fn fidelity_py(a: &PyDensityMatrix, b: &PyDensityMatrix) -> PyResult<f64> {
    fidelity(&a.inner, &b.inner).map_err(err_to_py)
}

/// Searches for the largest l1 coherence among states of dimension `dim`
/// with linear mixedness `mixedness`.
///
/// Returns a dict with the winning `state`, its `objective` (the l1
/// coherence), the `constraint_violation` against the mixedness target,
/// `iterations_used`, and a `converged` flag that is never claimed unless
/// the gradient target and the constraint were actually met.
#[pyfunction]
#[pyo3(signature = (dim, mixedness, restarts=16, seed=0, tolerance=1e-7, max_iterations=20_000))]
fn max_coherence_at_mixedness<'py>(
    py: Python<'py>,
    dim: usize,
    mixedness: f64,
    restarts: usize,
    seed: u64,
    tolerance: f64,
    max_iterations: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(restarts, seed, tolerance, max_iterations);
    let opt =
        cohmix::optimizer::max_coherence_at_mixedness(dim, mixedness, &cfg).map_err(err_to_py)?;
    let out = PyDict::new(py);
    out.set_item("state", PyDensityMatrix { inner: opt.state })?;
    out.set_item("objective", opt.objective)?;
    out.set_item("constraint_violation", opt.constraint_violation)?;
    out.set_item("iterations_used", opt.iterations_used)?;
    out.set_item("converged", opt.converged)?;
    Ok(out)
}

/// Maximizes `F(ρ, σ)` over incoherent (diagonal) `σ`; returns the best
/// `(state, fidelity)` pair. One minus the fidelity is the geometric
/// coherence.
#[pyfunction]
#[pyo3(signature = (state, restarts=16, seed=0, tolerance=1e-7))]
fn max_fidelity_incoherent(
    state: &PyDensityMatrix,
    restarts: usize,
    seed: u64,
    tolerance: f64,
) -> PyResult<(PyDensityMatrix, f64)> {
    let cfg = config(restarts, seed, tolerance, OptimizerConfig::default().max_iterations);
    let (sigma, f) =
        cohmix::optimizer::max_fidelity_incoherent(&state.inner, &cfg).map_err(err_to_py)?;
    Ok((PyDensityMatrix { inner: sigma }, f))
}

/// A mixed-unitary map holding every l1 coherence fixed while steering the
/// leading diagonal entry from `a1` to `a2`; the off-diagonal modulus is
/// `alpha`. See the CLI's `transform fixed-coherence` for the same
/// operation on files.
#[pyfunction]
fn fixed_coherence_plan(a1: f64, a2: f64, alpha: f64) -> PyResult<PyTransformPlan> {
    let inner = transforms::fixed_coherence_plan(a1, a2, alpha).map_err(err_to_py)?;
    Ok(PyTransformPlan { inner })
}

/// The similarity `S = V2 V1†` mapping `state1` onto `state2` when their
/// spectra agree; such a map preserves every mixedness measure exactly.
#[pyfunction]
fn fixed_mixedness_similarity(
    state1: &PyDensityMatrix,
    state2: &PyDensityMatrix,
) -> PyResult<PyTransformPlan> {
    let inner =
        transforms::fixed_mixedness_similarity(&state1.inner, &state2.inner).map_err(err_to_py)?;
    Ok(PyTransformPlan { inner })
}

/// Compares the spectra of two states in the majorization preorder; returns
/// `"Equal"`, `"FirstMajorizes"`, `"SecondMajorizes"`, or `"Incomparable"`.
#[pyfunction]
fn majorization_compare(first: &PyDensityMatrix, second: &PyDensityMatrix) -> PyResult<&'static str> {
    let order =
        transforms::majorization_compare(&first.inner, &second.inner).map_err(err_to_py)?;
    Ok(match order {
        MajorizationOrder::Equal => "Equal",
        MajorizationOrder::FirstMajorizes => "FirstMajorizes",
        MajorizationOrder::SecondMajorizes => "SecondMajorizes",
        MajorizationOrder::Incomparable => "Incomparable",
    })
}

#[pymodule]
fn cohmix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyTransformPlan>()?;
    m.add_function(wrap_pyfunction!(mcms, m)?)?;
    m.add_function(wrap_pyfunction!(mcms_at_mixedness, m)?)?;
    m.add_function(wrap_pyfunction!(maximally_coherent, m)?)?;
    m.add_function(wrap_pyfunction!(maximally_mixed_state, m)?)?;
    m.add_function(wrap_pyfunction!(ginibre_state, m)?)?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_py, m)?)?;
    m.add_function(wrap_pyfunction!(max_coherence_at_mixedness, m)?)?;
    m.add_function(wrap_pyfunction!(max_fidelity_incoherent, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_coherence_plan, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_mixedness_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(majorization_compare, m)?)?;
    Ok(())
}
