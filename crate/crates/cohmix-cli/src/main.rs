//! `cohmix` — measure, generate, scan, verify, and transform density
//! matrices from the command line.
//!
//! Every command is deterministic given its flags (randomized commands take
//! `--seed`, default 0, never wall-clock). Stdout payloads are JSON (12
//! significant digits) or CSV readable by the library's own parsers.
//!
//! Exit codes: 0 success, 1 validation error, 2 non-convergence, 3 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use cohmix::error::Error;
use cohmix::gellmann::to_bloch;
use cohmix::mcms::{complementarity_residual, mcms_from_mixedness, mcms_state, McmsParams};
use cohmix::measures::{
    entropic_tradeoff_residual, geometric_coherence_qubit, geometric_mixedness, l1_coherence,
    linear_entropy_mixedness, measure_report, measure_report_with_numeric_geometric,
    qubit_identity_check,
};
use cohmix::numfmt::round_json_sig12;
use cohmix::optimizer::{max_coherence_at_mixedness, stationarity_check, OptimizerConfig};
use cohmix::sampler::{ginibre_state, scan, write_parabola_csv, write_scan_csv, SeededRng};
use cohmix::transforms::{apply_plan, fixed_coherence_plan, fixed_mixedness_similarity};
use cohmix::DensityMatrix;

#[derive(Parser)]
#[command(
    name = "cohmix",
    about = "Coherence and mixedness measures for finite-dimensional density matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every measure of a state read from a JSON file.
    Measure(MeasureArgs),
    /// Emit a maximally coherent mixed state as JSON.
    Mcms(McmsArgs),
    /// Sample random states and write their (mixedness, coherence) cloud as
    /// CSV, with the bounding curve in a companion file.
    Scan(ScanArgs),
    /// Run the invariant suite and print a JSON verdict.
    Verify(VerifyArgs),
    /// Synthesize a state transformation and print its plan as JSON.
    #[command(subcommand)]
    Transform(TransformCommand),
}

#[derive(Args)]
struct MeasureArgs {
    /// Path to a state JSON file.
    #[arg(long)]
    state: PathBuf,
    /// Compute geometric coherence numerically for d > 2 (qubits always use
    /// the closed form).
    #[arg(long)]
    geometric: bool,
    /// RNG seed for the numeric geometric-coherence search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McmsArgs {
    /// Hilbert-space dimension (>= 2).
    #[arg(long)]
    dim: usize,
    /// Purity parameter p in [0, 1].
    #[arg(long, conflicts_with = "mixedness")]
    p: Option<f64>,
    /// Target linear-entropy mixedness in [0, 1] (solved for p).
    #[arg(long)]
    mixedness: Option<f64>,
    /// Write the state here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Hilbert-space dimension (>= 2).
    #[arg(long)]
    dim: usize,
    /// Number of samples (>= 1).
    #[arg(long)]
    n: usize,
    /// Ginibre rank parameter in [1, dim] [default: dim].
    #[arg(long)]
    k: Option<usize>,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points CSV path; the reference curve lands next to it with an
    /// `_parabola.csv` suffix.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict checks to one dimension [default: 2, 3, 4, 5].
    #[arg(long)]
    dim: Option<usize>,
    /// Random samples per dimension.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Grid points for the extremal-family check.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run only the qubit identity check.
    #[arg(long)]
    qubit_identity: bool,
    /// Also cross-check the coherence maximizer against the closed form.
    #[arg(long)]
    optimize: bool,
    /// Mixedness target for --optimize.
    #[arg(long, default_value_t = 0.5)]
    mixedness: f64,
    /// Relative tolerance for the --optimize objective.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum TransformCommand {
    /// Two-term mixed-unitary plan moving populations at fixed coherence in
    /// the real-off-diagonal qubit family.
    FixedCoherence(FixedCoherenceArgs),
    /// Similarity transform between two states with equal spectra.
    FixedMixedness(FixedMixednessArgs),
}

#[derive(Args)]
struct FixedCoherenceArgs {
    /// Source population rho_00.
    #[arg(long)]
    a1: f64,
    /// Target population rho_00.
    #[arg(long)]
    a2: f64,
    /// Shared real off-diagonal entry (>= 0).
    #[arg(long)]
    alpha: f64,
    /// Also apply the plan to the source state and include the result.
    #[arg(long)]
    apply: bool,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixedMixednessArgs {
    /// Path to the source state JSON file.
    #[arg(long)]
    state1: PathBuf,
    /// Path to the target state JSON file.
    #[arg(long)]
    state2: PathBuf,
    /// Also apply the plan to the source state and include the result.
    #[arg(long)]
    apply: bool,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit codes per the interface contract.
const EXIT_VALIDATION: i32 = 1;
const EXIT_NON_CONVERGENCE: i32 = 2;
const EXIT_IO: i32 = 3;

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::NotConverged { .. } | Error::OptimizerFailed { .. } => EXIT_NON_CONVERGENCE,
        _ => EXIT_VALIDATION,
    }
}

fn main() {
    // Usage errors are validation errors (exit 1); clap's default exit
    // code 2 is reserved here for non-convergence.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = match cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Mcms(args) => cmd_mcms(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Transform(TransformCommand::FixedCoherence(args)) => cmd_fixed_coherence(args),
        Command::Transform(TransformCommand::FixedMixedness(args)) => cmd_fixed_mixedness(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {}: {err}", err.name());
            std::process::exit(exit_code_for(&err));
        }
    }
}

/// Prints to stdout or writes to `out`; file problems are I/O errors.
fn emit(payload: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, payload.as_bytes())?,
        None => println!("{payload}"),
    }
    Ok(())
}

fn rounded_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    let mut v = serde_json::to_value(value)?;
    round_json_sig12(&mut v);
    Ok(serde_json::to_string_pretty(&v)?)
}

fn read_state(path: &Path) -> Result<DensityMatrix, Error> {
    let text = fs::read_to_string(path)?;
    DensityMatrix::from_json_str(&text)
}

fn cmd_measure(args: MeasureArgs) -> Result<i32, Error> {
    let rho = read_state(&args.state)?;
    let report = if args.geometric {
        let cfg = OptimizerConfig {
            seed: args.seed,
            ..OptimizerConfig::default()
        };
        measure_report_with_numeric_geometric(&rho, &cfg)?
    } else {
        measure_report(&rho)?
    };
    emit(&rounded_json(&report)?, args.out.as_deref())?;
    Ok(0)
}

fn cmd_mcms(args: McmsArgs) -> Result<i32, Error> {
    let params = match (args.p, args.mixedness) {
        (Some(p), None) => McmsParams::new(args.dim, p)?,
        (None, Some(m)) => mcms_from_mixedness(args.dim, m)?,
        (None, None) | (Some(_), Some(_)) => {
            return Err(Error::MalformedInput {
                detail: "exactly one of --p and --mixedness is required".into(),
            })
        }
    };
    let state = mcms_state(&params);
    emit(&state.to_json_string(), args.out.as_deref())?;
    Ok(0)
}

fn parabola_path(points: &Path) -> PathBuf {
    let stem = points
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scan".into());
    points.with_file_name(format!("{stem}_parabola.csv"))
}

fn cmd_scan(args: ScanArgs) -> Result<i32, Error> {
    let k = args.k.unwrap_or(args.dim);
    let rng = SeededRng::new(args.seed);
    let points = scan(args.dim, args.n, k, &rng)?;

    let mut points_file = fs::File::create(&args.out)?;
    write_scan_csv(&mut points_file, &points)?;
    points_file.flush()?;

    let curve_path = parabola_path(&args.out);
    let mut curve_file = fs::File::create(&curve_path)?;
    write_parabola_csv(&mut curve_file)?;
    curve_file.flush()?;

    // Violation of the trade-off bound: positive only if a point escapes
    // the feasible region.
    let max_violation = points
        .iter()
        .map(|p| p.scaled_coherence.powi(2) + p.mixedness - 1.0)
        .fold(f64::MIN, f64::max)
        .max(0.0);
    let summary = serde_json::json!({
        "dim": args.dim,
        "samples": points.len(),
        "seed": args.seed,
        "max_violation": max_violation,
        "points": args.out.display().to_string(),
        "parabola": curve_path.display().to_string(),
    });
    let mut v = summary;
    round_json_sig12(&mut v);
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(0)
}

struct Check {
    name: &'static str,
    dim: usize,
    worst: f64,
    threshold: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.worst <= self.threshold
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let dims: Vec<usize> = match args.dim {
        Some(d) => {
            if d < 2 {
                return Err(Error::DimensionTooSmall { dim: d });
            }
            vec![d]
        }
        None => vec![2, 3, 4, 5],
    };
    let mut checks: Vec<Check> = Vec::new();
    let mut non_convergence = false;

    let run_full_suite = !args.qubit_identity;

    if run_full_suite {
        for &d in &dims {
            // Extremal family: exact coherence/mixedness and zero residual
            // along the whole grid.
            let mut worst = 0.0_f64;
            for i in 0..args.grid.max(2) {
                let p = i as f64 / (args.grid.max(2) - 1) as f64;
                let rho = mcms_state(&McmsParams::new(d, p)?);
                worst = worst
                    .max((l1_coherence(&rho) - (d as f64 - 1.0) * p).abs())
                    .max((linear_entropy_mixedness(&rho)? - (1.0 - p * p)).abs())
                    .max(complementarity_residual(&rho)?.abs());
            }
            checks.push(Check {
                name: "mcms_grid",
                dim: d,
                worst,
                threshold: 1e-12,
            });

            // Entropic residual floor on random states.
            let base = SeededRng::with_stream(args.seed, d as u64);
            let mut min_residual = f64::MAX;
            for i in 0..args.n {
                let mut rng = base.substream(i as u64);
                let rho = ginibre_state(d, d, &mut rng)?;
                min_residual = min_residual.min(entropic_tradeoff_residual(&rho)?);
            }
            checks.push(Check {
                name: "entropic_floor",
                dim: d,
                worst: (-min_residual).max(0.0),
                threshold: 1e-10,
            });
        }
    }

    if dims.contains(&2) {
        let base = SeededRng::with_stream(args.seed.wrapping_add(1), 2);
        let mut worst_identity = 0.0_f64;
        let mut worst_geometric = f64::MIN;
        for i in 0..args.n {
            let mut rng = base.substream(i as u64);
            let rho = ginibre_state(2, 2, &mut rng)?;
            worst_identity = worst_identity.max(qubit_identity_check(&rho)?);
            let sum = geometric_coherence_qubit(&rho)? + geometric_mixedness(&rho);
            worst_geometric = worst_geometric.max(sum - 1.0);
        }
        checks.push(Check {
            name: "qubit_identity",
            dim: 2,
            worst: worst_identity,
            threshold: 1e-12,
        });
        if run_full_suite {
            checks.push(Check {
                name: "geometric_complementarity",
                dim: 2,
                worst: worst_geometric.max(0.0),
                threshold: 1e-10,
            });
        }
    } else if args.qubit_identity {
        return Err(Error::WrongDimension {
            expected: 2,
            got: *dims.first().unwrap_or(&0),
        });
    }

    let mut optimizer_results = Vec::new();
    if args.optimize {
        let cfg = OptimizerConfig {
            restarts: 4,
            seed: args.seed,
            tolerance: 1e-8,
            ..OptimizerConfig::default()
        };
        for &d in &dims {
            let opt = max_coherence_at_mixedness(d, args.mixedness, &cfg)?;
            let expected = (d as f64 - 1.0) * (1.0 - args.mixedness).sqrt();
            let rel = if expected > 0.0 {
                (opt.objective - expected).abs() / expected
            } else {
                opt.objective.abs()
            };
            if !opt.converged {
                non_convergence = true;
            }
            let report = stationarity_check(&to_bloch(&opt.state)?);
            optimizer_results.push(serde_json::json!({
                "dim": d,
                "mixedness": args.mixedness,
                "objective": opt.objective,
                "expected": expected,
                "relative_error": rel,
                "constraint_violation": opt.constraint_violation,
                "radius_spread": report.max_radius_spread,
                "converged": opt.converged,
            }));
            checks.push(Check {
                name: "optimizer_cross_check",
                dim: d,
                worst: rel,
                threshold: args.tolerance,
            });
        }
    }

    let all_pass = checks.iter().all(Check::pass) && !non_convergence;
    let mut verdict = serde_json::json!({
        "pass": all_pass,
        "checks": checks
            .iter()
            .map(|c| {
                serde_json::json!({
                    "name": c.name,
                    "dim": c.dim,
                    "worst": c.worst,
                    "threshold": c.threshold,
                    "pass": c.pass(),
                })
            })
            .collect::<Vec<_>>(),
    });
    if !optimizer_results.is_empty() {
        verdict["optimizer"] = serde_json::Value::Array(optimizer_results);
    }
    round_json_sig12(&mut verdict);
    println!("{}", serde_json::to_string_pretty(&verdict)?);

    if non_convergence {
        Ok(EXIT_NON_CONVERGENCE)
    } else if all_pass {
        Ok(0)
    } else {
        Ok(EXIT_VALIDATION)
    }
}

fn real_qubit(a: f64, alpha: f64) -> Result<DensityMatrix, Error> {
    DensityMatrix::from_rows(&[
        vec![Complex64::new(a, 0.0), Complex64::new(alpha, 0.0)],
        vec![Complex64::new(alpha, 0.0), Complex64::new(1.0 - a, 0.0)],
    ])
}

fn emit_plan(
    plan: &cohmix::transforms::TransformPlan,
    applied: Option<&DensityMatrix>,
    out: Option<&Path>,
) -> Result<(), Error> {
    let payload = match applied {
        None => plan.to_json_string(),
        Some(state) => {
            // Both parts stay parseable by their own readers after
            // extraction from the envelope.
            let mut v = serde_json::json!({
                "plan": serde_json::from_str::<serde_json::Value>(&plan.to_json_string())?,
                "applied_state": serde_json::from_str::<serde_json::Value>(&state.to_json_string())?,
            });
            round_json_sig12(&mut v);
            serde_json::to_string_pretty(&v)?
        }
    };
    emit(&payload, out)
}

fn cmd_fixed_coherence(args: FixedCoherenceArgs) -> Result<i32, Error> {
    let plan = fixed_coherence_plan(args.a1, args.a2, args.alpha)?;
    let applied = if args.apply {
        Some(apply_plan(&plan, &real_qubit(args.a1, args.alpha)?)?)
    } else {
        None
    };
    emit_plan(&plan, applied.as_ref(), args.out.as_deref())?;
    Ok(0)
}

fn cmd_fixed_mixedness(args: FixedMixednessArgs) -> Result<i32, Error> {
    let rho1 = read_state(&args.state1)?;
    let rho2 = read_state(&args.state2)?;
    let plan = fixed_mixedness_similarity(&rho1, &rho2)?;
    let applied = if args.apply {
        Some(apply_plan(&plan, &rho1)?)
    } else {
        None
    };
    emit_plan(&plan, applied.as_ref(), args.out.as_deref())?;
    Ok(0)
}
