//! Generalized Gell-Mann generators and the Bloch-vector picture.
//!
//! For dimension `d` the `d² - 1` traceless Hermitian generators come in a
//! fixed order that the rest of the crate relies on:
//!
//! 1. symmetric pair generators `u_jk = |j><k| + |k><j|` for `j < k`, pairs
//!    `(1,2), (1,3), ..., (1,d), (2,3), ..., (d-1,d)`;
//! 2. antisymmetric pair generators `v_jk = -i (|j><k| - |k><j|)`, same pair
//!    order;
//! 3. diagonal generators `w_l = sqrt(2/(l(l+1))) (Σ_{j<=l} |j><j| - l |l+1><l+1|)`
//!    for `l = 1 .. d-1`.
//!
//! All satisfy `Tr(Λ_i Λ_j) = 2 δ_ij`. A state maps to the Bloch vector
//! `x_i = Tr(ρ Λ_i)` and back through `ρ = I/d + (1/2) Σ_i x_i Λ_i`; the pair
//! components obey `x_u = 2 Re ρ_jk`, `x_v = -2 Im ρ_jk`, so each off-diagonal
//! modulus is half the radius `sqrt(x_u² + x_v²)`. That turns the l1 coherence
//! into a sum of pair radii and the linear-entropy mixedness into a function
//! of `‖x‖²` alone, which is what the fixed-mixedness optimizer exploits.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityMatrix;

/// Largest dimension for which generator sets are built (64² - 1 = 4095
/// dense matrices is already ~half a gigabyte of wasted cache beyond that).
pub const MAX_GENERATOR_DIM: usize = 64;

/// The ordered generator basis for one dimension.
#[derive(Debug)]
pub struct GeneratorSet {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `d² - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of `(j, k)` pairs, `(d² - d) / 2`.
    pub fn pair_count(&self) -> usize {
        (self.dim * self.dim - self.dim) / 2
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.generators[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.generators.iter()
    }
}

fn build_generator_set(d: usize) -> GeneratorSet {
    let zero = Complex64::new(0.0, 0.0);
    let mut generators = Vec::with_capacity(d * d - 1);

    // Symmetric pair generators.
    for j in 0..d {
        for k in (j + 1)..d {
            let g = ComplexMatrix::from_fn(d, d, |r, c| {
                if (r, c) == (j, k) || (r, c) == (k, j) {
                    Complex64::new(1.0, 0.0)
                } else {
                    zero
                }
            })
            .expect("generator entries are finite");
            generators.push(g);
        }
    }

    // Antisymmetric pair generators.
    for j in 0..d {
        for k in (j + 1)..d {
            let g = ComplexMatrix::from_fn(d, d, |r, c| {
                if (r, c) == (j, k) {
                    Complex64::new(0.0, -1.0)
                } else if (r, c) == (k, j) {
                    Complex64::new(0.0, 1.0)
                } else {
                    zero
                }
            })
            .expect("generator entries are finite");
            generators.push(g);
        }
    }

    // Diagonal generators (w_l acts on the first l+1 basis states).
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let g = ComplexMatrix::from_fn(d, d, |r, c| {
            if r != c {
                zero
            } else if r < l {
                Complex64::new(norm, 0.0)
            } else if r == l {
                Complex64::new(-(l as f64) * norm, 0.0)
            } else {
                zero
            }
        })
        .expect("generator entries are finite");
        generators.push(g);
    }

    GeneratorSet { dim: d, generators }
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<GeneratorSet>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorSet>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The generator basis for dimension `d`, memoized per dimension.
pub fn generator_set(d: usize) -> Result<Arc<GeneratorSet>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    if d > MAX_GENERATOR_DIM {
        return Err(Error::ParamOutOfRange {
            name: "d",
            value: d as f64,
            min: 2.0,
            max: MAX_GENERATOR_DIM as f64,
        });
    }
    let mut map = cache().lock().expect("generator cache poisoned");
    Ok(Arc::clone(
        map.entry(d).or_insert_with(|| Arc::new(build_generator_set(d))),
    ))
}

/// Bloch coordinates of a state, in generator order.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    dim: usize,
    x: Vec<f64>,
}

impl BlochVector {
    /// Validates length (`d² - 1`), finiteness and the purity bound
    /// `‖x‖² <= 2 (d-1)/d` (with 1e-9 slack).
    pub fn new(dim: usize, x: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim });
        }
        if x.len() != dim * dim - 1 {
            return Err(Error::LengthMismatch { len: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        let bound = 2.0 * (dim as f64 - 1.0) / dim as f64;
        if norm_sq > bound + 1e-9 {
            return Err(Error::ParamOutOfRange {
                name: "norm_sq",
                value: norm_sq,
                min: 0.0,
                max: bound,
            });
        }
        Ok(Self { dim, x })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.x
    }
}

/// Recovers `d >= 2` from a component count of `d² - 1`.
fn dim_from_len(len: usize) -> Result<usize> {
    let d = (len as f64 + 1.0).sqrt().round() as usize;
    if d >= 2 && d * d == len + 1 {
        Ok(d)
    } else {
        Err(Error::LengthMismatch { len })
    }
}

/// Bloch coordinates `x_i = Tr(ρ Λ_i)` of a validated state.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    let d = rho.dim();
    let set = generator_set(d)?;
    let x: Vec<f64> = set
        .iter()
        .map(|g| {
            let t = (rho.as_matrix() * g.matrix()).trace();
            debug_assert!(t.im.abs() <= 1e-12, "trace against Hermitian generator");
            t.re
        })
        .collect();
    BlochVector::new(d, x)
}

/// Rebuilds `I/d + (1/2) Σ x_i Λ_i` from raw coordinates.
///
/// The result is Hermitian with unit trace by construction but not
/// necessarily positive; run it through [`crate::state::make_state`] to
/// decide. Out-of-range coordinates are legitimate input here — that is how
/// non-physical points get flagged.
pub fn from_bloch(x: &[f64]) -> Result<ComplexMatrix> {
    let d = dim_from_len(x.len())?;
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        let _ = bad;
        return Err(Error::NonFinite);
    }
    let set = generator_set(d)?;
    let mut m = nalgebra::DMatrix::from_diagonal_element(
        d,
        d,
        Complex64::new(1.0 / d as f64, 0.0),
    );
    for (xi, g) in x.iter().zip(set.iter()) {
        if *xi != 0.0 {
            m += g.matrix().scale(0.5 * xi);
        }
    }
    ComplexMatrix::from_dmatrix(m)
}

/// l1 coherence from Bloch coordinates: the sum of pair radii
/// `sqrt(x_u² + x_v²)` over all `(j, k)` pairs.
pub fn l1_coherence_bloch(x: &[f64]) -> Result<f64> {
    let d = dim_from_len(x.len())?;
    let pairs = (d * d - d) / 2;
    let sum = (0..pairs)
        .map(|i| x[i].hypot(x[i + pairs]))
        .sum::<f64>();
    Ok(sum)
}

/// Linear-entropy mixedness from Bloch coordinates:
/// `M_l = 1 - d/(2(d-1)) ‖x‖²`.
pub fn mixedness_bloch(x: &[f64]) -> Result<f64> {
    let d = dim_from_len(x.len())?;
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    Ok(1.0 - d as f64 / (2.0 * (d as f64 - 1.0)) * norm_sq)
}
