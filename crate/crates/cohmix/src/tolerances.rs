//! Central numerical tolerances.
//!
//! Every validation threshold and cross-check tolerance in the crate is named
//! here so the acceptance bars live in one place.

/// Max-norm deviation from `m == m.adjoint()` accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Deviation of the trace from 1 accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// Most negative characteristic-polynomial coefficient accepted as positive
/// semidefinite (the coefficients amplify eigenvalue round-off, so this is
/// looser than [`PSD_TOL`]).
pub const CHARPOLY_PSD_TOL: f64 = 1e-9;

/// Max-norm error accepted when reconstructing a matrix from an
/// eigendecomposition or a Bloch vector.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Max-norm deviation from `u * u.adjoint() == I` accepted as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Largest cycle residual accepted when phases of a uniform-modulus state are
/// checked for consistency with a single phase-difference profile.
pub const PHASE_CONSISTENCY_TOL: f64 = 1e-8;

/// Largest elementwise spectral difference accepted when two states are
/// treated as having equal spectra (fixed-mixedness transforms).
pub const SPECTRA_MATCH_TOL: f64 = 1e-8;

/// Slack applied to partial-sum comparisons in majorization checks.
pub const MAJORIZATION_TOL: f64 = 1e-10;

/// Constraint violation below which a fixed-mixedness optimum counts as
/// feasible.
pub const CONSTRAINT_TOL: f64 = 1e-6;
