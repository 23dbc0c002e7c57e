//! Crate-wide error type.
//!
//! Validation errors carry the measured magnitude of the violation so callers
//! can log how far an input was from acceptable, not just that it failed.

use crate::state::DensityMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |m - m†| = {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("trace is not 1 (got {trace:.12})")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPSD { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max |u u† - I| = {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("dimension mismatch ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("dimension {dim} is too small (need at least 2)")]
    DimensionTooSmall { dim: usize },

    #[error("bloch vector length {len} is not d*d - 1 for any d >= 2")]
    LengthMismatch { len: usize },

    #[error("parameter `{name}` = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid spectrum: {detail}")]
    BadSpectrum { detail: String },

    #[error("invalid state: {detail}")]
    InvalidState { detail: String },

    #[error("map parameters are degenerate: |1 - 2 a1| = {denominator:.3e} admits no unique mixing weight")]
    Degenerate { denominator: f64 },

    #[error("populations violate the ordering required for a two-term mixed-unitary map (a1 = {a1}, a2 = {a2})")]
    OrderingViolated { a1: f64, a2: f64 },

    #[error("spectra differ (max |λ1 - λ2| = {max_diff:.3e}); no mixedness-preserving similarity exists")]
    SpectraMismatch { max_diff: f64 },

    #[error("spectrum is degenerate (min gap = {min_gap:.3e}) and the synthesized similarity missed (residual = {residual:.3e})")]
    DegenerateSpectrum { min_gap: f64, residual: f64 },

    #[error("off-diagonal phases are inconsistent with a single phase profile (worst cycle residual = {residual:.3e})")]
    InconsistentPhases {
        residual: f64,
        /// Best-effort canonicalization: the rotated state whose first row and
        /// column are real non-negative, kept for inspection.
        state: Box<DensityMatrix>,
    },

    #[error("optimizer did not converge: {detail}")]
    NotConverged { detail: String },

    #[error("optimizer failed: {detail}")]
    OptimizerFailed { detail: String },

    #[error("malformed input: {detail}")]
    MalformedInput { detail: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short name of the variant, for machine-friendly diagnostics
    /// (exit-code mapping, log filtering).
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NotSquare",
            Error::NonFinite => "NonFinite",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::NotPSD { .. } => "NotPSD",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::WrongDimension { .. } => "WrongDimension",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::BadSpectrum { .. } => "BadSpectrum",
            Error::InvalidState { .. } => "InvalidState",
            Error::Degenerate { .. } => "Degenerate",
            Error::OrderingViolated { .. } => "OrderingViolated",
            Error::SpectraMismatch { .. } => "SpectraMismatch",
            Error::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            Error::InconsistentPhases { .. } => "InconsistentPhases",
            Error::NotConverged { .. } => "NotConverged",
            Error::OptimizerFailed { .. } => "OptimizerFailed",
            Error::MalformedInput { .. } => "MalformedInput",
            Error::Json(_) => "Json",
            Error::Io(_) => "Io",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable_and_messages_carry_magnitudes() {
        let e = Error::NotPSD {
            min_eigenvalue: -0.5,
        };
        assert_eq!(e.name(), "NotPSD");
        assert!(e.to_string().contains("-5.000e-1"));

        let e = Error::ParamOutOfRange {
            name: "p",
            value: 1.5,
            min: 0.0,
            max: 1.0,
        };
        assert_eq!(e.name(), "ParamOutOfRange");
        assert!(e.to_string().contains("`p`"));
    }
}
