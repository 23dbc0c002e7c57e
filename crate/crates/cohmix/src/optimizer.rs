//! Numerical search for extremal coherence at fixed mixedness, and fidelity
//! maximization over incoherent states.
//!
//! # Fixed-mixedness coherence maximization
//!
//! The state is parametrized as `ρ = L L† / Tr(L L†)` with `L` a free complex
//! `d x d` matrix, which keeps every iterate positive by construction. The
//! mixedness constraint `M_l = m_f` enters as a quadratic penalty whose
//! weight is annealed upward over three stages; each stage runs a monotone
//! gradient ascent with Barzilai-Borwein steps and Armijo backtracking.
//! Gradients are analytic: with `W = U + 4 w κ (M - m_f) ρ` (where
//! `U_ij = ρ_ij/|ρ_ij|` off the diagonal and `κ = d/(d-1)`), the chain rule
//! through the normalized factorization gives `∂f/∂L = 2 (W - Tr(Wρ) I) L / t`
//! split into real and imaginary parts. The penalty leaves a small systematic
//! constraint offset (of order multiplier / weight), so a final polish
//! rescales the Bloch vector of the iterate isotropically onto the exact
//! mixedness sphere — a direction-preserving move that injects no structure
//! into the answer — and the state is revalidated. Reported objective and
//! violation always come from the returned state.
//!
//! # Fidelity maximization over incoherent states
//!
//! Incoherent states are exactly the diagonal ones, so the feasible set is
//! the probability simplex and `F(ρ, diag(q))` is maximized by projected
//! gradient ascent with an adaptive step, restarted from the dephased
//! diagonal of `ρ` and from random interior points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{from_bloch, to_bloch, BlochVector};
use crate::linalg::{hermitian_eig, ComplexMatrix};
use crate::measures::{l1_coherence, linear_entropy_mixedness};
use crate::sampler::SeededRng;
use crate::state::{make_state, maximally_mixed, DensityMatrix};
use crate::tolerances::CONSTRAINT_TOL;

/// Finite-difference step for the simplex fidelity gradient.
const FD_STEP: f64 = 1e-6;

/// Penalty-weight multiplier between annealing stages.
const STAGE_WEIGHT_FACTOR: f64 = 25.0;

/// Gradient targets of the first two annealing stages (the last stage uses
/// the configured tolerance).
const STAGE_GRAD_TOLS: [f64; 2] = [1e-4, 1e-5];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Independent restarts; the best feasible outcome wins, ties broken by
    /// restart index.
    pub restarts: usize,
    /// Iteration cap per annealing stage (or per projected ascent).
    pub max_iterations: usize,
    /// Initial ascent step before Barzilai-Borwein information exists.
    pub step_size: f64,
    /// First-stage constraint penalty weight; stages two and three multiply
    /// it by 25 and 625.
    pub penalty_weight: f64,
    /// Final-stage gradient infinity-norm target. Must not exceed 1e-4 or
    /// stationarity claims would be vacuous.
    pub tolerance: f64,
    /// Seed for restart starting points (restart `i` uses substream `i`).
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 20_000,
            step_size: 0.05,
            penalty_weight: 10.0,
            tolerance: 1e-7,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::ParamOutOfRange {
                name: "restarts",
                value: self.restarts as f64,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        if self.max_iterations < 1 {
            return Err(Error::ParamOutOfRange {
                name: "max_iterations",
                value: self.max_iterations as f64,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "step_size",
                value: self.step_size,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        if !(self.penalty_weight.is_finite() && self.penalty_weight > 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "penalty_weight",
                value: self.penalty_weight,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0 && self.tolerance <= 1e-4) {
            return Err(Error::ParamOutOfRange {
                name: "tolerance",
                value: self.tolerance,
                min: f64::MIN_POSITIVE,
                max: 1e-4,
            });
        }
        Ok(())
    }
}

/// Outcome of a fixed-mixedness coherence search.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub state: DensityMatrix,
    /// l1 coherence of `state`.
    pub objective: f64,
    /// `|M_l(state) - m_f|`.
    pub constraint_violation: f64,
    /// Accepted ascent iterations of the winning restart, summed over stages.
    pub iterations_used: usize,
    /// Final-stage gradient target reached and constraint satisfied to
    /// [`CONSTRAINT_TOL`]. Never claimed otherwise.
    pub converged: bool,
}

/// Structure report of a Bloch vector against the equal-radius, zero-`w`
/// profile that extremal states must satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct StationarityReport {
    /// `sqrt(x_u² + x_v²)` per `(j, k)` pair, in pair order.
    pub pair_radii: Vec<f64>,
    /// Diagonal-generator components.
    pub w_components: Vec<f64>,
    /// `max(pair_radii) - min(pair_radii)`.
    pub max_radius_spread: f64,
    /// `max |w_components|`.
    pub max_w_component: f64,
}

/// Decomposes a Bloch vector into pair radii and diagonal components.
pub fn stationarity_check(x: &BlochVector) -> StationarityReport {
    let d = x.dim();
    let pairs = (d * d - d) / 2;
    let comps = x.components();
    let pair_radii: Vec<f64> = (0..pairs).map(|i| comps[i].hypot(comps[i + pairs])).collect();
    let w_components: Vec<f64> = comps[2 * pairs..].to_vec();
    let max = pair_radii.iter().cloned().fold(f64::MIN, f64::max);
    let min = pair_radii.iter().cloned().fold(f64::MAX, f64::min);
    let max_w_component = w_components.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    StationarityReport {
        pair_radii,
        w_components,
        max_radius_spread: max - min,
        max_w_component,
    }
}

/// `C_l1 - weight (M_l - m_f)²` evaluated through `ρ(L) = L L† / Tr(L L†)`.
struct PenaltySurface {
    d: usize,
    m_f: f64,
    weight: f64,
}

impl PenaltySurface {
    fn value(&self, params: &[f64]) -> f64 {
        let d = self.d;
        let l = DMatrix::from_fn(d, d, |i, j| {
            let base = 2 * (i * d + j);
            Complex64::new(params[base], params[base + 1])
        });
        let h = &l * l.adjoint();
        let trace: f64 = (0..d).map(|i| h[(i, i)].re).sum();
        let inv = 1.0 / trace;
        let mut coherence = 0.0;
        let mut purity = 0.0;
        for i in 0..d {
            purity += (h[(i, i)].re * inv).powi(2);
            for j in (i + 1)..d {
                let z = h[(i, j)] * inv;
                coherence += 2.0 * z.norm();
                purity += 2.0 * z.norm_sqr();
            }
        }
        let mixedness = d as f64 / (d as f64 - 1.0) * (1.0 - purity);
        let gap = mixedness - self.m_f;
        coherence - self.weight * gap * gap
    }

    /// Exact gradient of [`Self::value`] with respect to the real and
    /// imaginary parts of `L`.
    ///
    /// Writing `f(ρ)` for the objective, `df = Tr(W dρ)` with the Hermitian
    /// `W = U + 4 w κ (M - m_f) ρ`, where `U` carries the phases
    /// `ρ_ij/|ρ_ij|` off the diagonal (zero where the entry vanishes — the
    /// objective is non-smooth there, and the zero subgradient is the
    /// conservative choice) and `κ = d/(d-1)`. Pulling back through
    /// `ρ = L L†/t` gives `∂f/∂L = 2 (W - Tr(Wρ) I) L / t`, whose real and
    /// imaginary entry parts are exactly the derivatives in the packed
    /// parameter layout.
    fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let d = self.d;
        let l = DMatrix::from_fn(d, d, |i, j| {
            let base = 2 * (i * d + j);
            Complex64::new(params[base], params[base + 1])
        });
        let h = &l * l.adjoint();
        let t: f64 = (0..d).map(|i| h[(i, i)].re).sum();
        let rho = h.unscale(t);

        let purity: f64 = rho.iter().map(|z| z.norm_sqr()).sum();
        let kappa = d as f64 / (d as f64 - 1.0);
        let mixedness = kappa * (1.0 - purity);
        let scale = 4.0 * self.weight * kappa * (mixedness - self.m_f);

        let mut w = DMatrix::from_fn(d, d, |i, j| {
            let z = rho[(i, j)];
            if i == j {
                z * scale
            } else {
                let n = z.norm();
                let phase = if n > 0.0 { z / n } else { Complex64::ZERO };
                phase + z * scale
            }
        });
        let trace_w_rho: f64 = (&w * &rho).trace().re;
        for i in 0..d {
            w[(i, i)] -= Complex64::new(trace_w_rho, 0.0);
        }
        let a = w * &l;

        let mut g = vec![0.0; params.len()];
        for i in 0..d {
            for j in 0..d {
                let base = 2 * (i * d + j);
                g[base] = 2.0 * a[(i, j)].re / t;
                g[base + 1] = 2.0 * a[(i, j)].im / t;
            }
        }
        g
    }

    fn density(&self, params: &[f64]) -> Result<DensityMatrix> {
        let d = self.d;
        let l = DMatrix::from_fn(d, d, |i, j| {
            let base = 2 * (i * d + j);
            Complex64::new(params[base], params[base + 1])
        });
        let h = &l * l.adjoint();
        let trace = h.trace().re;
        make_state(ComplexMatrix::from_dmatrix(h.unscale(trace))?)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

struct StageOutcome {
    iterations: usize,
    hit_tol: bool,
}

/// Monotone Barzilai-Borwein ascent with Armijo backtracking.
fn ascend(
    surface: &PenaltySurface,
    params: &mut Vec<f64>,
    max_iterations: usize,
    grad_tol: f64,
    initial_step: f64,
) -> StageOutcome {
    let mut f = surface.value(params);
    let mut g = surface.gradient(params);
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut step = initial_step;
    let mut stalls = 0;
    for it in 0..max_iterations {
        if inf_norm(&g) <= grad_tol {
            return StageOutcome {
                iterations: it,
                hit_tol: true,
            };
        }
        if let Some((pp, pg)) = &prev {
            let s: Vec<f64> = params.iter().zip(pp).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g.iter().zip(pg).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy < 0.0 {
                // Ascent analogue of the Barzilai-Borwein step.
                step = (dot(&s, &s) / -sy).clamp(1e-12, 1e3);
            } else {
                step *= 2.0;
            }
        }
        let gg = dot(&g, &g);
        let mut alpha = step;
        let mut accepted = false;
        for _ in 0..60 {
            let candidate: Vec<f64> = params.iter().zip(&g).map(|(p, gi)| p + alpha * gi).collect();
            let fc = surface.value(&candidate);
            if fc >= f + 1e-4 * alpha * gg {
                prev = Some((std::mem::replace(params, candidate), std::mem::take(&mut g)));
                f = fc;
                g = surface.gradient(params);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if accepted {
            stalls = 0;
        } else {
            // Line search exhausted: the objective can no longer be resolved
            // along this direction. One reset attempt, then report honestly.
            stalls += 1;
            step = initial_step;
            if stalls >= 2 {
                return StageOutcome {
                    iterations: it,
                    hit_tol: inf_norm(&g) <= grad_tol,
                };
            }
        }
    }
    StageOutcome {
        iterations: max_iterations,
        hit_tol: inf_norm(&g) <= grad_tol,
    }
}

/// Rescales the Bloch vector of `rho` onto the exact mixedness sphere
/// `‖x‖² = 2 (d-1)(1 - m_f)/d`. Falls back to the unpolished state if the
/// rescaled point left the positive cone.
fn polish_to_exact_mixedness(rho: DensityMatrix, m_f: f64) -> Result<DensityMatrix> {
    let d = rho.dim() as f64;
    let x = to_bloch(&rho)?;
    let norm_sq: f64 = x.components().iter().map(|v| v * v).sum();
    if norm_sq <= 0.0 {
        return Ok(rho);
    }
    let target = 2.0 * (d - 1.0) * (1.0 - m_f) / d;
    let scale = (target / norm_sq).sqrt();
    let scaled: Vec<f64> = x.components().iter().map(|v| v * scale).collect();
    match from_bloch(&scaled).and_then(make_state) {
        Ok(state) => Ok(state),
        Err(_) => Ok(rho),
    }
}

fn run_restart(d: usize, m_f: f64, cfg: &OptimizerConfig, restart: usize) -> Result<Optimum> {
    let mut rng = SeededRng::new(cfg.seed).substream(restart as u64);
    let mut params: Vec<f64> = (0..2 * d * d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();

    let mut iterations = 0;
    let mut final_stage_hit = false;
    for stage in 0..3 {
        let weight = cfg.penalty_weight * STAGE_WEIGHT_FACTOR.powi(stage as i32);
        let grad_tol = if stage < 2 {
            STAGE_GRAD_TOLS[stage].max(cfg.tolerance)
        } else {
            cfg.tolerance
        };
        let surface = PenaltySurface { d, m_f, weight };
        let outcome = ascend(&surface, &mut params, cfg.max_iterations, grad_tol, cfg.step_size);
        iterations += outcome.iterations;
        if stage == 2 {
            final_stage_hit = outcome.hit_tol;
        }
    }

    let raw = PenaltySurface {
        d,
        m_f,
        weight: 0.0,
    }
    .density(&params)?;
    let state = polish_to_exact_mixedness(raw, m_f)?;
    let objective = l1_coherence(&state);
    let constraint_violation = (linear_entropy_mixedness(&state)? - m_f).abs();
    Ok(Optimum {
        state,
        objective,
        constraint_violation,
        iterations_used: iterations,
        converged: final_stage_hit && constraint_violation <= CONSTRAINT_TOL,
    })
}

/// Searches for the largest l1 coherence among states of dimension `d` with
/// linear-entropy mixedness `m_f`.
///
/// Non-convergence is reported through `converged = false` on the best
/// restart rather than by discarding the result.
pub fn max_coherence_at_mixedness(d: usize, m_f: f64, cfg: &OptimizerConfig) -> Result<Optimum> {
    cfg.validate()?;
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    if !(0.0..=1.0).contains(&m_f) || !m_f.is_finite() {
        return Err(Error::ParamOutOfRange {
            name: "m_f",
            value: m_f,
            min: 0.0,
            max: 1.0,
        });
    }
    if m_f == 1.0 {
        // The feasible set is the single point I/d.
        return Ok(Optimum {
            state: maximally_mixed(d),
            objective: 0.0,
            constraint_violation: 0.0,
            iterations_used: 0,
            converged: true,
        });
    }

    let outcomes: Vec<Optimum> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(d, m_f, cfg, r))
        .collect::<Result<Vec<_>>>()?;

    // Deterministic reduction: feasible beats infeasible, then larger
    // objective, ties to the earlier restart.
    let mut best: Option<Optimum> = None;
    for candidate in outcomes {
        let better = match &best {
            None => true,
            Some(current) => {
                (candidate.converged, candidate.objective) > (current.converged, current.objective)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// `F(ρ, diag(q))` for a bare probability vector `q` (clamped at 0).
fn fidelity_to_diagonal(rho: &DensityMatrix, q: &[f64]) -> f64 {
    let d = rho.dim();
    let roots: Vec<f64> = q.iter().map(|&v| v.max(0.0).sqrt()).collect();
    let m = ComplexMatrix::from_fn(d, d, |i, j| rho.entry(i, j) * (roots[i] * roots[j]))
        .expect("entries are finite");
    let eig = hermitian_eig(&m).expect("built Hermitian");
    let trace_root: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    (trace_root * trace_root).min(1.0)
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn fidelity_gradient(rho: &DensityMatrix, q: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; q.len()];
    let mut work = q.to_vec();
    for i in 0..q.len() {
        let orig = work[i];
        if orig >= FD_STEP {
            work[i] = orig + FD_STEP;
            let fp = fidelity_to_diagonal(rho, &work);
            work[i] = orig - FD_STEP;
            let fm = fidelity_to_diagonal(rho, &work);
            g[i] = (fp - fm) / (2.0 * FD_STEP);
        } else {
            // One-sided at the boundary of the positive orthant.
            work[i] = orig + FD_STEP;
            let fp = fidelity_to_diagonal(rho, &work);
            work[i] = orig;
            let f0 = fidelity_to_diagonal(rho, &work);
            g[i] = (fp - f0) / FD_STEP;
        }
        work[i] = orig;
    }
    g
}

struct SimplexAscentOutcome {
    q: Vec<f64>,
    value: f64,
    converged: bool,
}

fn simplex_ascent(rho: &DensityMatrix, start: Vec<f64>, cfg: &OptimizerConfig) -> SimplexAscentOutcome {
    let mut q = project_simplex(&start);
    let mut f = fidelity_to_diagonal(rho, &q);
    let mut alpha = cfg.step_size;
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        let g = fidelity_gradient(rho, &q);
        // Fixed-point residual of the unit-step projected gradient map.
        let probe: Vec<f64> = q.iter().zip(&g).map(|(a, b)| a + b).collect();
        let residual = project_simplex(&probe)
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        if residual <= cfg.tolerance {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = q.iter().zip(&g).map(|(a, b)| a + alpha * b).collect();
            let candidate = project_simplex(&trial);
            let direction_gain: f64 = candidate.iter().zip(&q).zip(&g).map(|((c, a), gi)| (c - a) * gi).sum();
            let fc = fidelity_to_diagonal(rho, &candidate);
            if fc >= f + 1e-4 * direction_gain.max(0.0) && fc > f {
                q = candidate;
                f = fc;
                alpha *= 1.5;
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-16 {
                break;
            }
        }
        if !accepted {
            // No ascent direction to numerical precision: at the optimum.
            converged = true;
            break;
        }
    }
    SimplexAscentOutcome { q, value: f, converged }
}

/// Maximizes `F(ρ, σ)` over incoherent (diagonal) states `σ`.
///
/// The objective is concave over the simplex, so the dephased start already
/// converges globally; extra restarts guard the line search, and the result
/// never falls below `F(ρ, dephase(ρ))`.
pub fn max_fidelity_incoherent(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<(DensityMatrix, f64)> {
    cfg.validate()?;
    let d = rho.dim();
    if d < 2 {
        // One-dimensional states are trivially incoherent.
        return Ok((rho.clone(), 1.0));
    }

    let dephased: Vec<f64> = (0..d).map(|i| rho.entry(i, i).re.max(0.0)).collect();
    let outcomes: Vec<SimplexAscentOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                dephased.clone()
            } else {
                let mut rng = SeededRng::new(cfg.seed).substream(r as u64);
                (0..d)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect()
            };
            simplex_ascent(rho, start, cfg)
        })
        .collect();

    let mut best: Option<&SimplexAscentOutcome> = None;
    for candidate in &outcomes {
        let better = match best {
            None => true,
            Some(current) => (candidate.converged, candidate.value) > (current.converged, current.value),
        };
        if better {
            best = Some(candidate);
        }
    }
    let best = best.expect("restarts >= 1");
    if !best.converged {
        return Err(Error::NotConverged {
            detail: format!(
                "projected ascent exhausted {} iterations on every restart",
                cfg.max_iterations
            ),
        });
    }
    let total: f64 = best.q.iter().sum();
    let sigma = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(best.q[i] / total, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    Ok((make_state(sigma)?, best.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fidelity;
    use crate::mcms::{mcms_from_mixedness, mcms_state};
    use crate::sampler::ginibre_state;
    use crate::state::dephase;

    fn quick_cfg() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 3,
            seed: 7,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let mut rng = SeededRng::new(91);
        for d in [2usize, 3, 5] {
            let surface = PenaltySurface {
                d,
                m_f: 0.4,
                weight: 35.0,
            };
            let params: Vec<f64> = (0..2 * d * d)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            let g = surface.gradient(&params);
            let h = 1e-6;
            let mut probe = params.clone();
            for i in 0..params.len() {
                let orig = probe[i];
                probe[i] = orig + h;
                let fp = surface.value(&probe);
                probe[i] = orig - h;
                let fm = surface.value(&probe);
                probe[i] = orig;
                let fd = (fp - fm) / (2.0 * h);
                assert!(
                    (g[i] - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                    "component {i} at d = {d}: analytic {} vs numeric {fd}",
                    g[i]
                );
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        for bad in [
            OptimizerConfig { restarts: 0, ..OptimizerConfig::default() },
            OptimizerConfig { max_iterations: 0, ..OptimizerConfig::default() },
            OptimizerConfig { step_size: 0.0, ..OptimizerConfig::default() },
            OptimizerConfig { penalty_weight: -1.0, ..OptimizerConfig::default() },
            OptimizerConfig { tolerance: 1e-3, ..OptimizerConfig::default() },
            OptimizerConfig { tolerance: 0.0, ..OptimizerConfig::default() },
        ] {
            assert!(bad.validate().is_err());
        }
        // Serde fills unknown fields from defaults.
        let cfg: OptimizerConfig = serde_json::from_str(r#"{"restarts": 2}"#).unwrap();
        assert_eq!(cfg.restarts, 2);
        assert_eq!(cfg.max_iterations, OptimizerConfig::default().max_iterations);
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = quick_cfg();
        assert!(matches!(
            max_coherence_at_mixedness(1, 0.5, &cfg),
            Err(Error::DimensionTooSmall { dim: 1 })
        ));
        assert!(matches!(
            max_coherence_at_mixedness(2, -0.1, &cfg),
            Err(Error::ParamOutOfRange { name: "m_f", .. })
        ));
        assert!(matches!(
            max_coherence_at_mixedness(2, 1.1, &cfg),
            Err(Error::ParamOutOfRange { name: "m_f", .. })
        ));
    }

    #[test]
    fn full_mixedness_returns_the_identity_immediately() {
        let opt = max_coherence_at_mixedness(3, 1.0, &quick_cfg()).unwrap();
        assert!(opt.converged);
        assert_eq!(opt.iterations_used, 0);
        assert!(opt.objective.abs() < 1e-15);
        assert!(opt
            .state
            .as_complex_matrix()
            .max_abs_diff(maximally_mixed(3).as_complex_matrix())
            < 1e-15);
    }

    #[test]
    fn qubit_search_reaches_the_family_value() {
        // At m_f = 0.36 the achievable maximum is sqrt(1 - 0.36) = 0.8.
        let opt = max_coherence_at_mixedness(2, 0.36, &quick_cfg()).unwrap();
        assert!(opt.converged, "violation {}", opt.constraint_violation);
        assert!((opt.objective - 0.8).abs() <= 0.8 * 1e-3);
        assert!(opt.constraint_violation <= CONSTRAINT_TOL);

        let x = to_bloch(&opt.state).unwrap();
        let report = stationarity_check(&x);
        assert!(report.max_radius_spread <= 1e-6);
        assert!(report.max_w_component <= 1e-6);
    }

    #[test]
    fn stationarity_check_on_the_family_is_exact() {
        let rho = mcms_state(&mcms_from_mixedness(3, 0.5).unwrap());
        let report = stationarity_check(&to_bloch(&rho).unwrap());
        assert_eq!(report.pair_radii.len(), 3);
        assert_eq!(report.w_components.len(), 2);
        assert!(report.max_radius_spread <= 1e-15);
        assert!(report.max_w_component <= 1e-15);
        // All radii are 2 p / d.
        let p = (1.0 - 0.5_f64).sqrt();
        for r in &report.pair_radii {
            assert!((r - 2.0 * p / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn simplex_projection_properties() {
        for v in [
            vec![0.2, 0.3, 0.5],
            vec![1.5, -0.2, 0.1],
            vec![-1.0, -2.0, -3.0],
            vec![10.0, 0.0],
        ] {
            let p = project_simplex(&v);
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
            assert!(p.iter().all(|&x| x >= 0.0));
        }
        // Points already on the simplex are fixed.
        let p = project_simplex(&[0.25, 0.75]);
        assert!((p[0] - 0.25).abs() < 1e-12 && (p[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn diagonal_states_are_their_own_fidelity_maximizer() {
        let rho = crate::state::DensityMatrix::from_rows(&[
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.4, 0.0)],
        ])
        .unwrap();
        let (sigma, value) = max_fidelity_incoherent(&rho, &quick_cfg()).unwrap();
        assert!((value - 1.0).abs() <= 1e-9);
        assert!(sigma.as_complex_matrix().max_abs_diff(rho.as_complex_matrix()) <= 1e-6);
    }

    #[test]
    fn fidelity_maximizer_dominates_the_dephased_baseline() {
        let mut rng = SeededRng::new(15);
        let cfg = quick_cfg();
        for d in 2..=4 {
            for _ in 0..5 {
                let rho = ginibre_state(d, d, &mut rng).unwrap();
                let (sigma, value) = max_fidelity_incoherent(&rho, &cfg).unwrap();
                let baseline = fidelity(&rho, &dephase(&rho)).unwrap();
                assert!(value >= baseline - 1e-9, "below dephased baseline at d = {d}");
                assert!(value <= 1.0);
                // Maximizer is reported as a genuine diagonal state.
                for i in 0..d {
                    for j in 0..d {
                        if i != j {
                            assert_eq!(sigma.entry(i, j), Complex64::new(0.0, 0.0));
                        }
                    }
                }
                // Reported value matches the reported state.
                let check = fidelity(&rho, &sigma).unwrap();
                assert!((check - value).abs() <= 1e-8);
            }
        }
    }
}
