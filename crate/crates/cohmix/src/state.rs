//! Validated density matrices and basic state operations.
//!
//! [`make_state`] is the single entry point through which raw matrices become
//! [`DensityMatrix`] values; it enforces Hermiticity, unit trace and positive
//! semidefiniteness at the tolerances in [`crate::tolerances`]. Positivity can
//! also be tested without diagonalizing through the characteristic-polynomial
//! route ([`is_psd_by_charpoly`]), which must agree with the eigenvalue test.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, trace_power, ComplexMatrix};
use crate::numfmt::round_sig12;
use crate::tolerances::{CHARPOLY_PSD_TOL, HERMITICITY_TOL, PSD_TOL, TRACE_TOL, UNITARITY_TOL};

/// Density matrix: Hermitian, unit-trace, positive semidefinite.
///
/// Instances are only created through validation, so downstream code may rely
/// on the invariants without re-checking.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps `m`; see [`make_state`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let trace = m.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let eig = hermitian_eig(&m)?;
        let min = eig.eigenvalues[0];
        if min < -PSD_TOL {
            return Err(Error::NotPSD {
                min_eigenvalue: min,
            });
        }
        Ok(Self { m })
    }

    /// Convenience constructor from row-major entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m.entry(row, col)
    }

    pub fn as_complex_matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        self.m.matrix()
    }

    pub fn into_complex_matrix(self) -> ComplexMatrix {
        self.m
    }

    /// `Tr ρ²`, accumulated from squared moduli (exact for Hermitian input).
    pub fn purity(&self) -> f64 {
        self.as_matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues sorted ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.m)
            .expect("validated state is Hermitian")
            .eigenvalues
    }

    /// Serializes to the on-disk JSON form (12 significant digits).
    pub fn to_json_string(&self) -> String {
        let d = self.dim();
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = self.entry(i, j);
                        [round_sig12(z.re), round_sig12(z.im)]
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&StateJson { dim: d, entries })
            .expect("state serialization cannot fail")
    }

    /// Parses and validates the on-disk JSON form.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(s)?;
        raw.try_into()
    }
}

/// On-disk layout: `{"dim": d, "entries": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct StateJson {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<StateJson> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: StateJson) -> Result<Self> {
        if raw.entries.len() != raw.dim || raw.entries.iter().any(|r| r.len() != raw.dim) {
            return Err(Error::MalformedInput {
                detail: format!(
                    "entries shape does not match dim = {} ({} rows)",
                    raw.dim,
                    raw.entries.len()
                ),
            });
        }
        if raw
            .entries
            .iter()
            .flatten()
            .any(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(Error::MalformedInput {
                detail: "entries contain non-finite numbers".into(),
            });
        }
        let rows: Vec<Vec<Complex64>> = raw
            .entries
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        DensityMatrix::from_rows(&rows)
    }
}

/// Validates `m` as a density matrix.
pub fn make_state(m: ComplexMatrix) -> Result<DensityMatrix> {
    DensityMatrix::new(m)
}

/// Coefficients `A_1 ... A_d` of the characteristic polynomial
/// `det(λ I - ρ) = Σ_i (-1)^i A_i λ^(d-i)` (with `A_0 = 1`).
///
/// For a Hermitian unit-trace matrix, `A_1 = 1` and positivity of the matrix
/// is equivalent to all `A_i >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPolyCoefficients {
    coeffs: Vec<f64>,
}

impl CharPolyCoefficients {
    /// `A_i` for `1 <= i <= d`.
    pub fn a(&self, i: usize) -> f64 {
        assert!(i >= 1 && i <= self.coeffs.len(), "index {i} out of range");
        self.coeffs[i - 1]
    }

    /// All coefficients, `A_1` first.
    pub fn all(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Newton's identities: elementary symmetric polynomials of the spectrum from
/// the power sums `p_k = Tr ρ^k`, without computing the spectrum itself.
fn elementary_symmetric_from_traces(m: &ComplexMatrix) -> Vec<f64> {
    let d = m.dim();
    let mut power_sums = vec![0.0_f64; d + 1];
    for k in 1..=d {
        power_sums[k] = trace_power(m, k as u32).re;
    }
    let mut e = vec![0.0_f64; d + 1];
    e[0] = 1.0;
    for k in 1..=d {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[k - i] * power_sums[i];
        }
        e[k] = acc / k as f64;
    }
    e.drain(..1);
    e
}

/// Characteristic-polynomial coefficients of a validated state.
pub fn char_poly_coefficients(rho: &DensityMatrix) -> CharPolyCoefficients {
    CharPolyCoefficients {
        coeffs: elementary_symmetric_from_traces(rho.as_complex_matrix()),
    }
}

/// Positivity test that never diagonalizes: a Hermitian unit-trace matrix is
/// positive semidefinite iff every characteristic-polynomial coefficient is
/// non-negative (up to [`CHARPOLY_PSD_TOL`]).
pub fn is_psd_by_charpoly(m: &ComplexMatrix) -> Result<bool> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let trace = m.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace: trace.re });
    }
    let coeffs = elementary_symmetric_from_traces(m);
    Ok(coeffs.iter().all(|&a| a >= -CHARPOLY_PSD_TOL))
}

/// Projects onto the diagonal: off-diagonal entries dropped, diagonal kept
/// bitwise (so the map is exactly idempotent and trace-preserving).
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(rho.entry(i, i).re, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("diagonal projection preserves shape");
    DensityMatrix::new(m).expect("diagonal of a valid state is a valid state")
}

/// Von Neumann entropy `S(ρ) = -Σ λ ln λ` in nats, clamped to `>= 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .spectrum()
        .iter()
        .map(|&l| if l > 0.0 { -l * l.ln() } else { 0.0 })
        .sum();
    s.max(0.0)
}

/// `u ρ u†` for unitary `u`.
pub fn apply_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: u.dim(),
        });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    let rotated = u.matrix() * rho.as_matrix() * u.matrix().adjoint();
    DensityMatrix::new(ComplexMatrix::from_dmatrix(rotated)?)
}

/// The pure state with all entries `1/d`: the coherence maximizer at fixed
/// dimension.
pub fn maximally_coherent_pure(d: usize) -> DensityMatrix {
    assert!(d >= 1, "dimension must be at least 1");
    let val = Complex64::new(1.0 / d as f64, 0.0);
    let m = ComplexMatrix::from_fn(d, d, |_, _| val).expect("constant matrix is finite");
    DensityMatrix::new(m).expect("uniform pure projector is a valid state")
}

/// `I/d`.
pub fn maximally_mixed(d: usize) -> DensityMatrix {
    assert!(d >= 1, "dimension must be at least 1");
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(1.0 / d as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("diagonal matrix is finite");
    DensityMatrix::new(m).expect("I/d is a valid state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        DensityMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.5, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn make_state_accepts_valid_and_reports_violations() {
        assert_eq!(plus_state().dim(), 2);

        let err = DensityMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.3, 0.0)],
            vec![c(0.1, 0.0), c(0.5, 0.0)],
        ])
        .unwrap_err();
        match err {
            Error::NotHermitian { defect } => assert!((defect - 0.2).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }

        let err = DensityMatrix::new(ComplexMatrix::identity(2)).unwrap_err();
        match err {
            Error::TraceNotOne { trace } => assert!((trace - 2.0).abs() < 1e-15),
            other => panic!("expected TraceNotOne, got {other:?}"),
        }

        // Hermitian, trace one, but indefinite.
        let err = DensityMatrix::from_rows(&[
            vec![c(0.75, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.25, 0.0)],
        ])
        .unwrap_err();
        match err {
            Error::NotPSD { min_eigenvalue } => {
                let expected = (1.0 - 1.25_f64.sqrt()) / 2.0;
                assert!((min_eigenvalue - expected).abs() < 1e-12);
            }
            other => panic!("expected NotPSD, got {other:?}"),
        }
    }

    #[test]
    fn charpoly_matches_hand_computed_coefficients() {
        let half = maximally_mixed(2);
        let coeffs = char_poly_coefficients(&half);
        assert!((coeffs.a(1) - 1.0).abs() < 1e-14);
        assert!((coeffs.a(2) - 0.25).abs() < 1e-14);

        let third = maximally_mixed(3);
        let coeffs = char_poly_coefficients(&third);
        assert!((coeffs.a(1) - 1.0).abs() < 1e-14);
        assert!((coeffs.a(2) - 1.0 / 3.0).abs() < 1e-14);
        assert!((coeffs.a(3) - 1.0 / 27.0).abs() < 1e-14);

        // Rank-one projector: every product of two or more eigenvalues is zero.
        let coeffs = char_poly_coefficients(&plus_state());
        assert!((coeffs.a(1) - 1.0).abs() < 1e-14);
        assert!(coeffs.a(2).abs() < 1e-14);
    }

    #[test]
    fn charpoly_psd_test_agrees_with_eigenvalues() {
        // Indefinite but Hermitian with unit trace.
        let bad = ComplexMatrix::from_rows(&[
            vec![c(0.75, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.25, 0.0)],
        ])
        .unwrap();
        assert!(!is_psd_by_charpoly(&bad).unwrap());

        let good = plus_state();
        assert!(is_psd_by_charpoly(good.as_complex_matrix()).unwrap());

        let err = is_psd_by_charpoly(&ComplexMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::TraceNotOne { .. }));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Random Hermitian unit-trace matrices, definite or not: the
        // polynomial test and the eigenvalue test must agree.
        #[test]
        fn charpoly_agrees_with_eigen_on_random_hermitian(
            seed in 0u64..1_000_000,
            d in 2usize..=5,
            spread in 0.1f64..3.0,
        ) {
            use rand::Rng;
            let mut rng = crate::sampler::SeededRng::new(seed);
            let g = DMatrix::from_fn(d, d, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let herm = (&g + g.adjoint()).scale(0.5 * spread);
            let shift = (1.0 - herm.trace().re) / d as f64;
            let m = ComplexMatrix::from_dmatrix(
                herm + DMatrix::identity(d, d).scale(shift),
            ).unwrap();

            let by_poly = is_psd_by_charpoly(&m).unwrap();
            let by_eigen = hermitian_eig(&m).unwrap().eigenvalues[0] >= -PSD_TOL;
            // Skip razor-edge spectra where the two thresholds legitimately
            // straddle; random draws land there with probability ~0.
            let min = hermitian_eig(&m).unwrap().eigenvalues[0];
            prop_assume!((min.abs() > 1e-8) || min == 0.0);
            prop_assert_eq!(by_poly, by_eigen);
        }
    }

    #[test]
    fn dephase_is_idempotent_and_exact() {
        let rho = DensityMatrix::from_rows(&[
            vec![c(0.3, 0.0), c(0.2, 0.1)],
            vec![c(0.2, -0.1), c(0.7, 0.0)],
        ])
        .unwrap();
        let diag = dephase(&rho);
        assert_eq!(diag.entry(0, 0), c(0.3, 0.0));
        assert_eq!(diag.entry(1, 1), c(0.7, 0.0));
        assert_eq!(diag.entry(0, 1), c(0.0, 0.0));
        assert_eq!(dephase(&diag), diag);
    }

    #[test]
    fn entropy_closed_forms() {
        assert!(von_neumann_entropy(&plus_state()).abs() < 1e-12);
        for d in [2usize, 3, 5, 8] {
            let s = von_neumann_entropy(&maximally_mixed(d));
            assert!((s - (d as f64).ln()).abs() < 1e-12, "S(I/{d}) != ln {d}");
        }
        // Spectrum {0.8, 0.2}.
        let rho = DensityMatrix::from_rows(&[
            vec![c(0.8, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.2, 0.0)],
        ])
        .unwrap();
        let expected = -(0.8_f64 * 0.8_f64.ln() + 0.2 * 0.2_f64.ln());
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-14);
    }

    #[test]
    fn apply_unitary_rotates_and_validates() {
        let h = 1.0 / 2.0_f64.sqrt();
        let hadamard = ComplexMatrix::from_rows(&[
            vec![c(h, 0.0), c(h, 0.0)],
            vec![c(h, 0.0), c(-h, 0.0)],
        ])
        .unwrap();
        let zero = DensityMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let rotated = apply_unitary(&zero, &hadamard).unwrap();
        assert!(rotated.as_complex_matrix().max_abs_diff(plus_state().as_complex_matrix()) < 1e-15);

        let not_unitary = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            apply_unitary(&zero, &not_unitary),
            Err(Error::NotUnitary { .. })
        ));

        assert!(matches!(
            apply_unitary(&zero, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reference_states_have_expected_entries() {
        let psi = maximally_coherent_pure(4);
        for i in 0..4 {
            for j in 0..4 {
                assert!((psi.entry(i, j) - c(0.25, 0.0)).norm() < 1e-15);
            }
        }
        assert!((psi.purity() - 1.0).abs() < 1e-12);

        let mixed = maximally_mixed(4);
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
        assert_eq!(maximally_mixed(1).dim(), 1);
        assert_eq!(maximally_coherent_pure(1).entry(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn json_round_trip_preserves_entries() {
        let rho = DensityMatrix::from_rows(&[
            vec![c(0.3, 0.0), c(0.2, 0.1)],
            vec![c(0.2, -0.1), c(0.7, 0.0)],
        ])
        .unwrap();
        let text = rho.to_json_string();
        let back = DensityMatrix::from_json_str(&text).unwrap();
        assert!(rho.as_complex_matrix().max_abs_diff(back.as_complex_matrix()) < 1e-11);
    }

    #[test]
    fn json_rejects_malformed_input() {
        // Shape mismatch: dim 3 with 2x2 entries.
        let bad = r#"{"dim": 3, "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;
        assert!(matches!(
            DensityMatrix::from_json_str(bad),
            Err(Error::MalformedInput { .. })
        ));

        // Ragged rows.
        let bad = r#"{"dim": 2, "entries": [[[0.5, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;
        assert!(matches!(
            DensityMatrix::from_json_str(bad),
            Err(Error::MalformedInput { .. })
        ));

        // Overflowing literal parses to infinity; must be rejected, not stored.
        let bad = r#"{"dim": 2, "entries": [[[1e999, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;
        assert!(DensityMatrix::from_json_str(bad).is_err());

        // Not JSON at all.
        assert!(matches!(
            DensityMatrix::from_json_str("mixedness"),
            Err(Error::Json(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn json_round_trip_on_random_states(seed in 0u64..1_000_000, d in 2usize..=6) {
            let mut rng = crate::sampler::SeededRng::new(seed);
            let rho = crate::sampler::ginibre_state(d, d, &mut rng).unwrap();
            let back = DensityMatrix::from_json_str(&rho.to_json_string()).unwrap();
            prop_assert!(
                rho.as_complex_matrix().max_abs_diff(back.as_complex_matrix()) < 1e-11
            );
        }
    }
}
