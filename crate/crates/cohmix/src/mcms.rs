//! The maximally-coherent-mixed-state (MCMS) family and phase-twisted
//! relatives.
//!
//! `ρ_p = (1-p)/d · I + p |ψ><ψ|` with `|ψ>` the maximally coherent pure
//! state has uniform diagonal `1/d` and uniform off-diagonal entries `p/d`.
//! Along the family, `C_l1 = (d-1) p` and `M_l = 1 - p²`, so the trade-off
//! `C_l1²/(d-1)² + M_l = 1` holds with equality: these states sit exactly on
//! the boundary that general states only approach.
//!
//! A circle state keeps the uniform diagonal and a uniform off-diagonal
//! modulus but lets every pair carry its own phase. When those phases are
//! consistent with a single per-basis-state profile (`φ_jk = γ_j - γ_k`), an
//! incoherent diagonal unitary rotates the state back onto the real family
//! without touching any modulus; [`canonicalize_phases`] performs exactly
//! that rotation and reports inconsistent profiles instead of guessing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::tradeoff_residual;
use crate::state::{apply_unitary, make_state, DensityMatrix};
use crate::tolerances::PHASE_CONSISTENCY_TOL;

/// Parameters of one MCMS family member; serialized as `{"dim": d, "p": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McmsParams {
    pub dim: usize,
    pub p: f64,
}

impl McmsParams {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::ParamOutOfRange {
                name: "p",
                value: p,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Self { dim, p })
    }

    /// Validates an instance that arrived through deserialization.
    pub fn validated(self) -> Result<Self> {
        Self::new(self.dim, self.p)
    }
}

/// Parameters of a circle state: uniform diagonal, off-diagonal modulus
/// `R/2 = sqrt(1 - m)/d`, and one phase per `(j, k)` pair in generator order.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleStateParams {
    pub dim: usize,
    pub mixedness_target: f64,
    pub thetas: Vec<f64>,
}

impl CircleStateParams {
    pub fn new(dim: usize, mixedness_target: f64, thetas: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
        if !(0.0..=1.0).contains(&mixedness_target) || !mixedness_target.is_finite() {
            return Err(Error::ParamOutOfRange {
                name: "mixedness_target",
                value: mixedness_target,
                min: 0.0,
                max: 1.0,
            });
        }
        let pairs = (dim * dim - dim) / 2;
        if thetas.len() != pairs {
            return Err(Error::LengthMismatch { len: thetas.len() });
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            dim,
            mixedness_target,
            thetas,
        })
    }
}

/// Builds the MCMS family member: diagonal `1/d`, off-diagonal `p/d`.
pub fn mcms_state(params: &McmsParams) -> DensityMatrix {
    let d = params.dim;
    let diag = Complex64::new(1.0 / d as f64, 0.0);
    let off = Complex64::new(params.p / d as f64, 0.0);
    let m = ComplexMatrix::from_fn(d, d, |i, j| if i == j { diag } else { off })
        .expect("entries are finite");
    make_state(m).expect("MCMS states are valid for p in [0, 1]")
}

/// Solves `M_l = 1 - p²` for the family member with the requested mixedness:
/// `p = sqrt(1 - m_f)`.
pub fn mcms_from_mixedness(dim: usize, m_f: f64) -> Result<McmsParams> {
    if !(0.0..=1.0).contains(&m_f) || !m_f.is_finite() {
        return Err(Error::ParamOutOfRange {
            name: "m_f",
            value: m_f,
            min: 0.0,
            max: 1.0,
        });
    }
    McmsParams::new(dim, (1.0 - m_f).sqrt())
}

/// Builds a circle state: uniform diagonal `1/d`, off-diagonal
/// `(R/2) e^{i θ_jk}` with `R = 2 sqrt(1 - m)/d`, pairs in generator order.
///
/// For `d >= 3`, phase profiles that close no consistent cycle can push an
/// eigenvalue negative at low mixedness; such inputs are rejected as
/// `NotPSD` rather than silently projected back.
pub fn circle_state(params: &CircleStateParams) -> Result<DensityMatrix> {
    let d = params.dim;
    let radius = (1.0 - params.mixedness_target).sqrt() / d as f64;
    let mut pair_index = vec![vec![0usize; d]; d];
    let mut idx = 0;
    for j in 0..d {
        for k in (j + 1)..d {
            pair_index[j][k] = idx;
            idx += 1;
        }
    }
    let m = ComplexMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(1.0 / d as f64, 0.0)
        } else {
            let (j, k) = (r.min(c), r.max(c));
            let theta = params.thetas[pair_index[j][k]];
            let entry = Complex64::from_polar(radius, theta);
            if r < c {
                entry
            } else {
                entry.conj()
            }
        }
    })
    .expect("entries are finite");
    make_state(m)
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Rotates a uniform-modulus state onto the real (phase-free) family.
///
/// Requires a uniform diagonal and uniform off-diagonal moduli (to 1e-10).
/// The phase profile `γ` is read off the first row; if every cycle closes on
/// it (residual within [`PHASE_CONSISTENCY_TOL`]), the incoherent unitary
/// `U = diag(e^{-i γ_n})` is applied and `(U ρ U†, U)` returned, all moduli
/// and hence `C_l1` untouched. Otherwise the best-effort rotation is reported
/// inside [`Error::InconsistentPhases`].
pub fn canonicalize_phases(rho: &DensityMatrix) -> Result<(DensityMatrix, ComplexMatrix)> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let uniform = 1.0 / d as f64;
    for i in 0..d {
        let dev = (rho.entry(i, i).re - uniform).abs();
        if dev > 1e-10 {
            return Err(Error::InvalidState {
                detail: format!("diagonal entry {i} deviates from 1/d by {dev:.3e}"),
            });
        }
    }
    let moduli: Vec<f64> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .map(|(j, k)| rho.entry(j, k).norm())
        .collect();
    let mean: f64 = moduli.iter().sum::<f64>() / moduli.len() as f64;
    if let Some(dev) = moduli
        .iter()
        .map(|r| (r - mean).abs())
        .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.max(v))))
    {
        if dev > 1e-10 {
            return Err(Error::InvalidState {
                detail: format!("off-diagonal moduli deviate from uniform by {dev:.3e}"),
            });
        }
    }

    if mean <= 1e-12 {
        // Vanishing off-diagonals: already canonical.
        return Ok((rho.clone(), ComplexMatrix::identity(d)));
    }

    // γ_0 = 0 and γ_k = -arg ρ_0k zeroes the first row's phases.
    let mut gamma = vec![0.0_f64; d];
    for (k, g) in gamma.iter_mut().enumerate().skip(1) {
        *g = -rho.entry(0, k).arg();
    }
    let mut residual = 0.0_f64;
    for j in 0..d {
        for k in (j + 1)..d {
            let phi = rho.entry(j, k).arg();
            residual = residual.max(wrap_angle(phi - gamma[j] + gamma[k]).abs());
        }
    }

    let u = ComplexMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, -gamma[r])
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("diagonal phases are finite");
    let rotated = apply_unitary(rho, &u)?;

    if residual > PHASE_CONSISTENCY_TOL {
        return Err(Error::InconsistentPhases {
            residual,
            state: Box::new(rotated),
        });
    }
    Ok((rotated, u))
}

/// Signed slack in `C_l1²/(d-1)² + M_l <= 1`; vanishes (to 1e-12) on the
/// MCMS family.
pub fn complementarity_residual(rho: &DensityMatrix) -> Result<f64> {
    tradeoff_residual(rho)
}
