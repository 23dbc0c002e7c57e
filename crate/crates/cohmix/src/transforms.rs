//! State transformations at fixed coherence or fixed mixedness, and
//! majorization comparison of spectra.
//!
//! Two complementary directions:
//!
//! - **Fixed coherence, changed mixedness**: for the real-off-diagonal qubit
//!   family `ρ(a) = [[a, α], [α, 1-a]]`, the two-term mixed-unitary map
//!   `Φ[ρ] = p ρ + (1-p) σ_x ρ σ_x` moves the populations while the bit-flip
//!   leaves the off-diagonal untouched. The weight solving
//!   `Φ[ρ(a1)] = ρ(a2)` is `p = (1 - a1 - a2)/(1 - 2 a1)`, admissible when
//!   the populations are ordered so that `p` lies in `[0, 1]`. Mixing can
//!   only average spectra, so the output is always majorized by the input.
//! - **Fixed mixedness (equal spectra)**: two states with the same spectrum
//!   are unitarily similar; pairing eigenvectors by descending eigenvalue
//!   and fixing each column's phase gives `S = V2 V1†` with `S ρ1 S† = ρ2`.
//!   `S` is unique up to a phase per eigenvector when the spectrum is
//!   non-degenerate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::numfmt::round_sig12;
use crate::state::{make_state, DensityMatrix};
use crate::tolerances::{
    MAJORIZATION_TOL, RECONSTRUCTION_TOL, SPECTRA_MATCH_TOL, UNITARITY_TOL,
};

/// Outcome of comparing two spectra in the majorization preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MajorizationOrder {
    /// Sorted spectra agree elementwise to [`MAJORIZATION_TOL`].
    Equal,
    FirstMajorizes,
    SecondMajorizes,
    Incomparable,
}

/// What kind of map a [`TransformPlan`] encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanKind {
    /// Convex mixture of unitary conjugations.
    MixedUnitary,
    /// A single similarity `ρ -> S ρ S†`.
    Similarity,
}

impl PlanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanKind::MixedUnitary => "MixedUnitary",
            PlanKind::Similarity => "Similarity",
        }
    }
}

/// One weighted unitary of a plan.
#[derive(Clone, Debug)]
pub struct PlanComponent {
    pub weight: f64,
    pub unitary: ComplexMatrix,
}

/// Executable description of a state transformation, with the max-norm
/// residual measured against the target it was synthesized for.
#[derive(Clone, Debug)]
pub struct TransformPlan {
    pub kind: PlanKind,
    pub components: Vec<PlanComponent>,
    pub residual: f64,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    weight: f64,
    unitary: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct PlanJson {
    kind: String,
    components: Vec<ComponentJson>,
    residual: f64,
}

impl TransformPlan {
    pub fn to_json_string(&self) -> String {
        let components = self
            .components
            .iter()
            .map(|c| ComponentJson {
                weight: round_sig12(c.weight),
                unitary: (0..c.unitary.dim())
                    .map(|i| {
                        (0..c.unitary.dim())
                            .map(|j| {
                                let z = c.unitary.entry(i, j);
                                [round_sig12(z.re), round_sig12(z.im)]
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let raw = PlanJson {
            kind: self.kind.as_str().to_string(),
            components,
            residual: round_sig12(self.residual),
        };
        serde_json::to_string_pretty(&raw).expect("plan serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: PlanJson = serde_json::from_str(s)?;
        let kind = match raw.kind.as_str() {
            "MixedUnitary" => PlanKind::MixedUnitary,
            "Similarity" => PlanKind::Similarity,
            other => {
                return Err(Error::MalformedInput {
                    detail: format!("unknown plan kind `{other}`"),
                })
            }
        };
        let mut components = Vec::with_capacity(raw.components.len());
        for (idx, c) in raw.components.iter().enumerate() {
            let d = c.unitary.len();
            if d == 0 || c.unitary.iter().any(|row| row.len() != d) {
                return Err(Error::MalformedInput {
                    detail: format!("component {idx}: unitary entries are not square"),
                });
            }
            if c.unitary
                .iter()
                .flatten()
                .any(|[re, im]| !re.is_finite() || !im.is_finite())
                || !c.weight.is_finite()
            {
                return Err(Error::MalformedInput {
                    detail: format!("component {idx}: non-finite numbers"),
                });
            }
            let rows: Vec<Vec<Complex64>> = c
                .unitary
                .iter()
                .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                .collect();
            components.push(PlanComponent {
                weight: c.weight,
                unitary: ComplexMatrix::from_rows(&rows)?,
            });
        }
        let plan = TransformPlan {
            kind,
            components,
            residual: raw.residual,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Structural checks: non-empty, non-negative weights summing to 1,
    /// genuinely unitary components of one common dimension.
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::MalformedInput {
                detail: "plan has no components".into(),
            });
        }
        let d = self.components[0].unitary.dim();
        let mut weight_sum = 0.0;
        for (idx, c) in self.components.iter().enumerate() {
            if !(c.weight >= 0.0) {
                return Err(Error::ParamOutOfRange {
                    name: "weight",
                    value: c.weight,
                    min: 0.0,
                    max: 1.0,
                });
            }
            weight_sum += c.weight;
            if c.unitary.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: c.unitary.dim(),
                });
            }
            let defect = c.unitary.unitarity_defect();
            if defect > UNITARITY_TOL {
                let _ = idx;
                return Err(Error::NotUnitary { defect });
            }
        }
        if (weight_sum - 1.0).abs() > 1e-12 {
            return Err(Error::MalformedInput {
                detail: format!("component weights sum to {weight_sum}, not 1"),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.components.first().map_or(0, |c| c.unitary.dim())
    }
}

/// Compares the spectra of two states in the majorization preorder.
pub fn majorization_compare(
    first: &DensityMatrix,
    second: &DensityMatrix,
) -> Result<MajorizationOrder> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            left: first.dim(),
            right: second.dim(),
        });
    }
    let mut a = first.spectrum();
    let mut b = second.spectrum();
    a.reverse();
    b.reverse();

    let equal = a
        .iter()
        .zip(&b)
        .all(|(x, y)| (x - y).abs() <= MAJORIZATION_TOL);
    if equal {
        return Ok(MajorizationOrder::Equal);
    }
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut first_ge = true;
    let mut second_ge = true;
    for (x, y) in a.iter().zip(&b) {
        sum_a += x;
        sum_b += y;
        if sum_a < sum_b - MAJORIZATION_TOL {
            first_ge = false;
        }
        if sum_b < sum_a - MAJORIZATION_TOL {
            second_ge = false;
        }
    }
    Ok(if first_ge {
        MajorizationOrder::FirstMajorizes
    } else if second_ge {
        MajorizationOrder::SecondMajorizes
    } else {
        MajorizationOrder::Incomparable
    })
}

fn real_qubit(a: f64, alpha: f64) -> Result<DensityMatrix> {
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(a, 0.0), Complex64::new(alpha, 0.0)],
        vec![Complex64::new(alpha, 0.0), Complex64::new(1.0 - a, 0.0)],
    ])?;
    make_state(m).map_err(|e| Error::InvalidState {
        detail: format!("qubit with a = {a}, alpha = {alpha}: {e}"),
    })
}

fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .expect("constant matrix")
}

/// Synthesizes the two-term mixed-unitary map sending `ρ(a1)` to `ρ(a2)` in
/// the real-off-diagonal qubit family with coherence `2 α` held fixed.
///
/// Requires `0 <= alpha` and populations ordered as `a1 <= a2 <= 1 - a1` or
/// `1 - a1 <= a2 <= a1`, which is exactly when the mixing weight
/// `p = (1 - a1 - a2)/(1 - 2 a1)` lies in `[0, 1]`. `a1 = 1/2` is degenerate
/// unless `a2 = a1` (the identity plan).
pub fn fixed_coherence_plan(a1: f64, a2: f64, alpha: f64) -> Result<TransformPlan> {
    for (name, value) in [("a1", a1), ("a2", a2)] {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::ParamOutOfRange {
                name,
                value,
                min: 0.0,
                max: 1.0,
            });
        }
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::ParamOutOfRange {
            name: "alpha",
            value: alpha,
            min: 0.0,
            max: 0.5,
        });
    }
    let source = real_qubit(a1, alpha)?;
    let target = real_qubit(a2, alpha)?;

    if a1 == a2 {
        let plan = TransformPlan {
            kind: PlanKind::MixedUnitary,
            components: vec![PlanComponent {
                weight: 1.0,
                unitary: ComplexMatrix::identity(2),
            }],
            residual: 0.0,
        };
        return Ok(plan);
    }

    let denominator = 1.0 - 2.0 * a1;
    if denominator.abs() <= 1e-12 {
        return Err(Error::Degenerate {
            denominator: denominator.abs(),
        });
    }
    let ordered_up = a1 - 1e-12 <= a2 && a2 <= 1.0 - a1 + 1e-12;
    let ordered_down = 1.0 - a1 - 1e-12 <= a2 && a2 <= a1 + 1e-12;
    if !(ordered_up || ordered_down) {
        return Err(Error::OrderingViolated { a1, a2 });
    }
    let p = ((1.0 - a1 - a2) / denominator).clamp(0.0, 1.0);

    let plan = TransformPlan {
        kind: PlanKind::MixedUnitary,
        components: vec![
            PlanComponent {
                weight: p,
                unitary: ComplexMatrix::identity(2),
            },
            PlanComponent {
                weight: 1.0 - p,
                unitary: sigma_x(),
            },
        ],
        residual: 0.0,
    };
    let mapped = apply_plan(&plan, &source)?;
    let residual = mapped
        .as_complex_matrix()
        .max_abs_diff(target.as_complex_matrix());
    Ok(TransformPlan { residual, ..plan })
}

/// Applies `ρ -> Σ_i w_i U_i ρ U_i†` and revalidates the output.
pub fn apply_plan(plan: &TransformPlan, rho: &DensityMatrix) -> Result<DensityMatrix> {
    plan.validate()?;
    if plan.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: plan.dim(),
            right: rho.dim(),
        });
    }
    let d = rho.dim();
    let mut acc = nalgebra::DMatrix::<Complex64>::zeros(d, d);
    for c in &plan.components {
        if c.weight == 0.0 {
            continue;
        }
        let u = c.unitary.matrix();
        acc += (u * rho.as_matrix() * u.adjoint()).scale(c.weight);
    }
    make_state(ComplexMatrix::from_dmatrix(acc)?)
}

/// Phase-canonicalizes each column: the entry of largest modulus (first such
/// index on ties) is rotated to the positive real axis.
fn canonicalize_columns(v: &ComplexMatrix) -> ComplexMatrix {
    let d = v.dim();
    let mut m = v.matrix().clone();
    for col in 0..d {
        let mut lead = 0;
        let mut best = 0.0;
        for row in 0..d {
            let mag = m[(row, col)].norm();
            if mag > best {
                best = mag;
                lead = row;
            }
        }
        if best > 0.0 {
            let phase = m[(lead, col)] / best;
            for row in 0..d {
                m[(row, col)] *= phase.conj();
            }
        }
    }
    ComplexMatrix::from_dmatrix(m).expect("phase rotation preserves shape")
}

/// Synthesizes the similarity `S = V2 V1†` mapping `rho1` onto `rho2` when
/// the two spectra agree (to [`SPECTRA_MATCH_TOL`]); such a map preserves
/// every mixedness measure exactly.
///
/// Eigenvectors are paired by descending eigenvalue with per-column phases
/// fixed by [`canonicalize_columns`], making the result deterministic; any
/// other valid similarity differs from it by a phase per eigenvector. With a
/// degenerate spectrum the pairing inside a degenerate block is arbitrary —
/// harmless for reproducing `rho2`, but flagged if the residual is off.
pub fn fixed_mixedness_similarity(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
) -> Result<TransformPlan> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    let d = rho1.dim();
    let eig1 = hermitian_eig(rho1.as_complex_matrix())?;
    let eig2 = hermitian_eig(rho2.as_complex_matrix())?;

    // Ascending to descending.
    let spectrum1: Vec<f64> = eig1.eigenvalues.iter().rev().cloned().collect();
    let spectrum2: Vec<f64> = eig2.eigenvalues.iter().rev().cloned().collect();
    let max_diff = spectrum1
        .iter()
        .zip(&spectrum2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    if max_diff > SPECTRA_MATCH_TOL {
        return Err(Error::SpectraMismatch { max_diff });
    }

    let reorder = |m: &ComplexMatrix| {
        ComplexMatrix::from_fn(d, d, |i, j| m.entry(i, d - 1 - j)).expect("column permutation")
    };
    let v1 = canonicalize_columns(&reorder(&eig1.eigenvectors));
    let v2 = canonicalize_columns(&reorder(&eig2.eigenvectors));
    let s = ComplexMatrix::from_dmatrix(v2.matrix() * v1.matrix().adjoint())?;

    let plan = TransformPlan {
        kind: PlanKind::Similarity,
        components: vec![PlanComponent {
            weight: 1.0,
            unitary: s,
        }],
        residual: 0.0,
    };
    let mapped = apply_plan(&plan, rho1)?;
    let residual = mapped
        .as_complex_matrix()
        .max_abs_diff(rho2.as_complex_matrix());

    if residual > RECONSTRUCTION_TOL {
        let min_gap = spectrum1
            .windows(2)
            .map(|w| (w[0] - w[1]).abs())
            .fold(f64::MAX, f64::min);
        if min_gap < SPECTRA_MATCH_TOL {
            return Err(Error::DegenerateSpectrum { min_gap, residual });
        }
    }
    Ok(TransformPlan { residual, ..plan })
}
