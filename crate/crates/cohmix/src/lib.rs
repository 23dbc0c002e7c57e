//! Numerical toolkit for quantum coherence and mixedness of finite-dimensional
//! density matrices.
//!
//! The crate covers, for states of dimension `d` expressed in a fixed reference
//! basis:
//!
//! - validated density matrices with Hermiticity / unit-trace / positivity
//!   checks, including a characteristic-polynomial positivity test that avoids
//!   diagonalization ([`state`]);
//! - the generalized Gell-Mann generator basis and the Bloch-vector picture,
//!   with coherence and mixedness evaluated directly from Bloch coordinates
//!   ([`gellmann`]);
//! - coherence monotones (l1-norm, relative entropy, geometric) and mixedness
//!   measures (normalized linear entropy, von Neumann entropy, geometric),
//!   together with the coherence-mixedness trade-off residuals ([`measures`]);
//! - the maximally-coherent-mixed-state family attaining the trade-off bound,
//!   and the wider circle of states sharing its moduli pattern ([`mcms`]);
//! - seeded Hilbert-Schmidt sampling and trade-off scans ([`sampler`]);
//! - a penalty-method optimizer that searches for the largest l1 coherence at
//!   fixed linear-entropy mixedness, plus a fidelity maximizer over incoherent
//!   states ([`optimizer`]);
//! - coherence-preserving mixed-unitary maps, mixedness-preserving similarity
//!   transforms, and majorization comparison of spectra ([`transforms`]).
//!
//! All tolerances used for validation and cross-checks live in [`tolerances`].

pub mod error;
pub mod gellmann;
pub mod linalg;
pub mod mcms;
pub mod measures;
pub mod numfmt;
pub mod optimizer;
pub mod sampler;
pub mod state;
pub mod tolerances;
pub mod transforms;

pub use error::{Error, Result};
pub use linalg::{fidelity, hermitian_eig, matrix_sqrt_psd, trace_power, ComplexMatrix};
pub use state::{make_state, DensityMatrix};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
