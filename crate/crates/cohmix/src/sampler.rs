//! Seeded random-state generation and trade-off scans.
//!
//! Randomness is always explicit: every public sampler takes a [`SeededRng`],
//! and bulk scans derive one independent counter-based substream per sample,
//! so results are bitwise reproducible regardless of thread count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::io;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::measures::{l1_coherence, linear_entropy_mixedness};
use crate::numfmt::fmt_sig12;
use crate::state::DensityMatrix;
use crate::tolerances::UNITARITY_TOL;

/// Deterministic RNG: ChaCha8 keyed by a `u64` seed, with cheap independent
/// substreams for parallel sampling.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl SeededRng {
    /// Generator algorithm tag, recorded alongside seeds in reports.
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Fresh generator on substream `index` of the same seed, independent of
    /// how much of `self` has been consumed.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_stream(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    fn standard_normal(&mut self) -> f64 {
        self.sample(StandardNormal)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// `d x k` matrix of independent standard complex Gaussians.
fn ginibre_matrix(d: usize, k: usize, rng: &mut SeededRng) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, k, |_, _| {
        Complex64::new(rng.standard_normal(), rng.standard_normal())
    })
}

/// Random state `g g† / Tr(g g†)` with `g` a `d x k` complex Ginibre matrix.
///
/// `k = d` gives the Hilbert-Schmidt ensemble; `k = 1` gives Haar-random pure
/// states. The result passes full density-matrix validation.
pub fn ginibre_state(d: usize, k: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    if k < 1 || k > d {
        return Err(Error::ParamOutOfRange {
            name: "k",
            value: k as f64,
            min: 1.0,
            max: d as f64,
        });
    }
    loop {
        let g = ginibre_matrix(d, k, rng);
        let h = &g * g.adjoint();
        let trace = h.trace().re;
        // A zero draw has probability zero but would divide by zero; redraw.
        if trace > 1e-12 {
            let m = ComplexMatrix::from_dmatrix(h.unscale(trace))?;
            return DensityMatrix::new(m);
        }
    }
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of the
/// diagonal of `R` folded into `Q` (otherwise the distribution is biased).
pub fn haar_unitary(d: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    if d < 1 {
        return Err(Error::ParamOutOfRange {
            name: "d",
            value: d as f64,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let g = ginibre_matrix(d, d, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else {
            let rii = r[(i, i)];
            if rii.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                rii / rii.norm()
            }
        }
    });
    let u = ComplexMatrix::from_dmatrix(q * phases)?;
    debug_assert!(u.unitarity_defect() <= UNITARITY_TOL);
    Ok(u)
}

/// Random state with the prescribed spectrum: `U diag(spectrum) U†` for Haar
/// `U`. Mixedness measures are then fixed by the spectrum alone.
pub fn random_fixed_spectrum_state(spectrum: &[f64], rng: &mut SeededRng) -> Result<DensityMatrix> {
    let d = spectrum.len();
    if d < 1 {
        return Err(Error::BadSpectrum {
            detail: "spectrum is empty".into(),
        });
    }
    if let Some(&bad) = spectrum.iter().find(|&&l| !(l >= -1e-12) || !l.is_finite()) {
        return Err(Error::BadSpectrum {
            detail: format!("entry {bad} is negative or non-finite"),
        });
    }
    let sum: f64 = spectrum.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::BadSpectrum {
            detail: format!("entries sum to {sum}, not 1"),
        });
    }
    let u = haar_unitary(d, rng)?;
    let diag = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(spectrum[i].max(0.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = u.matrix() * diag * u.matrix().adjoint();
    DensityMatrix::new(ComplexMatrix::from_dmatrix(m)?)
}

/// One sampled point of the coherence-mixedness scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub mixedness: f64,
    /// `C_l1 / (d - 1)`, so the trade-off bound reads `sc² + m <= 1`.
    pub scaled_coherence: f64,
}

/// Samples `n` Ginibre states of dimension `d` (rank parameter `k`) and
/// returns their `(M_l, C_l1 / (d-1))` coordinates.
///
/// Sample `i` draws from substream `i` of `rng`'s seed, so the output is
/// identical whatever the rayon thread count.
pub fn scan(d: usize, n: usize, k: usize, rng: &SeededRng) -> Result<Vec<ScanPoint>> {
    if n < 1 {
        return Err(Error::ParamOutOfRange {
            name: "n",
            value: n as f64,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng.substream(i as u64);
            let state = ginibre_state(d, k, &mut stream)?;
            Ok(ScanPoint {
                mixedness: linear_entropy_mixedness(&state)?,
                scaled_coherence: l1_coherence(&state) / (d as f64 - 1.0),
            })
        })
        .collect()
}

/// Writes scan points as `mixedness,scaled_coherence` CSV rows with 12
/// significant digits.
pub fn write_scan_csv<W: io::Write>(mut w: W, points: &[ScanPoint]) -> Result<()> {
    writeln!(w, "mixedness,scaled_coherence")?;
    for p in points {
        writeln!(w, "{},{}", fmt_sig12(p.mixedness), fmt_sig12(p.scaled_coherence))?;
    }
    Ok(())
}

/// Reads back what [`write_scan_csv`] produces.
pub fn read_scan_csv<R: io::BufRead>(r: R) -> Result<Vec<ScanPoint>> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(header)) if header.trim() == "mixedness,scaled_coherence" => {}
        Some(Ok(header)) => {
            return Err(Error::MalformedInput {
                detail: format!("unexpected csv header `{header}`"),
            })
        }
        Some(Err(e)) => return Err(e.into()),
        None => {
            return Err(Error::MalformedInput {
                detail: "empty csv".into(),
            })
        }
    }
    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let parse = |field: Option<&str>| -> Result<f64> {
            let text = field.ok_or_else(|| Error::MalformedInput {
                detail: format!("row {}: expected two fields", idx + 2),
            })?;
            let value: f64 = text.trim().parse().map_err(|_| Error::MalformedInput {
                detail: format!("row {}: `{text}` is not a number", idx + 2),
            })?;
            if !value.is_finite() {
                return Err(Error::MalformedInput {
                    detail: format!("row {}: non-finite value", idx + 2),
                });
            }
            Ok(value)
        };
        let mixedness = parse(fields.next())?;
        let scaled_coherence = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::MalformedInput {
                detail: format!("row {}: expected two fields", idx + 2),
            });
        }
        points.push(ScanPoint {
            mixedness,
            scaled_coherence,
        });
    }
    Ok(points)
}

/// Writes the reference curve `bound = sqrt(1 - m)` on a 0.001 grid over
/// `[0, 1]` as `mixedness,bound` CSV rows.
pub fn write_parabola_csv<W: io::Write>(mut w: W) -> Result<()> {
    writeln!(w, "mixedness,bound")?;
    for i in 0..=1000 {
        let m = i as f64 / 1000.0;
        writeln!(w, "{},{}", fmt_sig12(m), fmt_sig12((1.0 - m).max(0.0).sqrt()))?;
    }
    Ok(())
}
