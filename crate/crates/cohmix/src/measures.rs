//! Coherence and mixedness measures, and the trade-off residuals connecting
//! them.
//!
//! Conventions (all in the fixed reference basis):
//!
//! - l1 coherence `C_l1 = Σ_{i≠j} |ρ_ij|`, at most `d - 1`;
//! - relative entropy of coherence `C_r = S(dephase(ρ)) - S(ρ)` in nats;
//! - geometric coherence `C_g = 1 - max_σ F(ρ, σ)` over incoherent
//!   (diagonal) `σ`, with a qubit closed form and a numeric route;
//! - normalized linear-entropy mixedness `M_l = d/(d-1) (1 - Tr ρ²)`;
//! - geometric mixedness `M_g = F(ρ, I/d)`;
//! - trade-off residual `1 - C_l1²/(d-1)² - M_l`, non-negative for every
//!   state, zero exactly on the maximally-coherent-mixed family;
//! - entropic residual `1 - (C_r + S(ρ))/ln d = 1 - S(dephase(ρ))/ln d`,
//!   likewise non-negative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimizer::{max_fidelity_incoherent, OptimizerConfig};
use crate::state::{dephase, von_neumann_entropy, DensityMatrix};

/// All measures of one state in a single serializable record.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub dim: usize,
    pub c_l1: f64,
    pub c_rel_entropy: f64,
    /// Geometric coherence; populated for qubits (closed form) or when the
    /// numeric route is requested explicitly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_geometric: Option<f64>,
    pub m_linear: f64,
    pub m_von_neumann: f64,
    pub m_geometric: f64,
    pub tradeoff_residual: f64,
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += rho.entry(i, j).norm();
            }
        }
    }
    sum
}

/// `S(dephase(ρ)) - S(ρ)` in nats. Non-negative up to round-off (−1e-12).
pub fn relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy(&dephase(rho)) - von_neumann_entropy(rho)
}

/// Qubit geometric coherence `(1 - sqrt(1 - 4 |ρ_01|²)) / 2`.
pub fn geometric_coherence_qubit(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let c = rho.entry(0, 1).norm_sqr();
    // |ρ_01|² <= 1/4 for every qubit state; clamp round-off.
    Ok((1.0 - (1.0 - 4.0 * c).max(0.0).sqrt()) / 2.0)
}

/// Geometric coherence for any dimension, via fidelity maximization over
/// diagonal states.
pub fn geometric_coherence_numeric(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    let (_, best) = max_fidelity_incoherent(rho, cfg).map_err(|e| Error::OptimizerFailed {
        detail: e.to_string(),
    })?;
    Ok(1.0 - best)
}

/// Normalized linear entropy `M_l = d/(d-1) (1 - Tr ρ²)`, in `[0, 1]`.
pub fn linear_entropy_mixedness(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let m = d as f64 / (d as f64 - 1.0) * (1.0 - rho.purity());
    Ok(m.clamp(0.0, 1.0))
}

/// Geometric mixedness `M_g = F(ρ, I/d) = (Tr √ρ)² / d`, in `[1/d, 1]`.
pub fn geometric_mixedness(rho: &DensityMatrix) -> f64 {
    let trace_root: f64 = rho.spectrum().iter().map(|&l| l.max(0.0).sqrt()).sum();
    (trace_root * trace_root / rho.dim() as f64).clamp(0.0, 1.0)
}

/// `1 - C_l1²/(d-1)² - M_l`: slack in the coherence-mixedness trade-off.
/// Non-negative (to −1e-9) for every state.
pub fn tradeoff_residual(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim() as f64;
    let c = l1_coherence(rho) / (d - 1.0);
    Ok(1.0 - c * c - linear_entropy_mixedness(rho)?)
}

/// Qubit identity `C_l1² + M_l = 4 a (1 - a)` with `a = ρ_00`: returns the
/// absolute deviation, which is pure round-off (≤ 1e-12) for valid qubits.
pub fn qubit_identity_check(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: rho.dim(),
        });
    }
    let a = rho.entry(0, 0).re;
    let c = l1_coherence(rho);
    let m = linear_entropy_mixedness(rho)?;
    Ok((c * c + m - 4.0 * a * (1.0 - a)).abs())
}

/// `1 - S(dephase(ρ)) / ln d`: slack in the entropic trade-off
/// `C_r + S <= ln d`, normalized to `[0, 1]`. Non-negative to −1e-10, and
/// zero whenever the diagonal of `ρ` is uniform.
pub fn entropic_tradeoff_residual(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    Ok(1.0 - von_neumann_entropy(&dephase(rho)) / (d as f64).ln())
}

/// Every measure of `rho`; geometric coherence filled in for qubits only.
pub fn measure_report(rho: &DensityMatrix) -> Result<MeasureReport> {
    let c_geometric = if rho.dim() == 2 {
        Some(geometric_coherence_qubit(rho)?)
    } else {
        None
    };
    build_report(rho, c_geometric)
}

/// Like [`measure_report`], but geometric coherence is computed numerically
/// for any dimension (qubits still use the closed form).
pub fn measure_report_with_numeric_geometric(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<MeasureReport> {
    let c_geometric = if rho.dim() == 2 {
        geometric_coherence_qubit(rho)?
    } else {
        geometric_coherence_numeric(rho, cfg)?
    };
    build_report(rho, Some(c_geometric))
}

fn build_report(rho: &DensityMatrix, c_geometric: Option<f64>) -> Result<MeasureReport> {
    Ok(MeasureReport {
        dim: rho.dim(),
        c_l1: l1_coherence(rho),
        c_rel_entropy: relative_entropy_coherence(rho),
        c_geometric,
        m_linear: linear_entropy_mixedness(rho)?,
        m_von_neumann: von_neumann_entropy(rho),
        m_geometric: geometric_mixedness(rho),
        tradeoff_residual: tradeoff_residual(rho)?,
    })
}
