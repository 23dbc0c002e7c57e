//! Dense complex linear algebra shared by every other module.
//!
//! The workhorse is the Hermitian eigendecomposition; matrix square roots and
//! Uhlmann fidelity are built on top of it. Decompositions always hermitize
//! their input first (average with the adjoint) so that round-off asymmetry
//! below the validation tolerance cannot leak into eigenvectors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityMatrix;
use crate::tolerances::{HERMITICITY_TOL, PSD_TOL};

/// Square complex matrix with finite entries.
///
/// Squareness and finiteness are checked once at construction; everything
/// downstream (states, generators, unitaries) builds on this type.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    m: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Wraps a dense matrix, rejecting non-square shapes and NaN/Inf entries.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m })
    }

    /// Builds from row-major nested slices.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            return Err(Error::NotSquare { rows: d, cols });
        }
        Self::from_dmatrix(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// Builds entry-by-entry from a closure over `(row, col)`; `rows` must
    /// equal `cols` (the signature mirrors [`DMatrix::from_fn`]).
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        rows: usize,
        cols: usize,
        f: F,
    ) -> Result<Self> {
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `(m + m†) / 2`: the Hermitian part.
    pub fn hermitized(&self) -> Self {
        let adj = self.m.adjoint();
        Self {
            m: (&self.m + adj).scale(0.5),
        }
    }

    /// `max_ij |m_ij - conj(m_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                let defect = (self.m[(i, j)] - self.m[(j, i)].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    /// `max_ij |(u u†  - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        let prod = &self.m * self.m.adjoint();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// `max_ij |self_ij - other_ij|`; panics if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on mismatched dims");
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.m[idx]
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted ascending; column `k` of `eigenvectors` is
/// the unit eigenvector paired with `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V diag(λ) V†` (used by reconstruction checks).
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = self.eigenvectors.matrix();
        let d = v.nrows();
        let diag = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(self.eigenvalues[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        ComplexMatrix {
            m: v * diag * v.adjoint(),
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Rejects inputs whose Hermiticity defect exceeds the validation tolerance;
/// below it, the input is hermitized before factorization.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let d = m.dim();
    let se = m.hermitized().into_matrix().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(d, d, |r, c| se.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix { m: eigenvectors },
    })
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero; anything more negative
/// is an error.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPSD {
                min_eigenvalue: min,
            });
        }
    }
    let d = m.dim();
    let v = eig.eigenvectors.matrix();
    let diag = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(eig.eigenvalues[i].max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let root = v * diag * v.adjoint();
    // Hermitize to strip the O(eps) asymmetry of the triple product.
    Ok(ComplexMatrix { m: root }.hermitized())
}

/// Uhlmann fidelity `F(ρ, σ) = (Tr √(√σ ρ √σ))²`.
///
/// Symmetric in its arguments and clamped to `[0, 1]`; `F(ρ, ρ) = 1` up to
/// round-off.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let root = matrix_sqrt_psd(sigma.as_complex_matrix())?;
    let inner = ComplexMatrix {
        m: root.matrix() * rho.as_matrix() * root.matrix(),
    }
    .hermitized();
    let eig = hermitian_eig(&inner)?;
    let trace_root: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok((trace_root * trace_root).clamp(0.0, 1.0))
}

/// `Tr(m^k)` for `k >= 1`, by repeated multiplication.
///
/// The imaginary part is below 1e-12 for Hermitian input and is returned
/// untouched so callers can assert on it.
pub fn trace_power(m: &ComplexMatrix, k: u32) -> Complex64 {
    assert!(k >= 1, "trace_power requires k >= 1");
    let mut acc = m.matrix().clone();
    for _ in 1..k {
        acc = &acc * m.matrix();
    }
    acc.trace()
}
