//! Command-line analyzer for vector-valued nonuniform Gabor systems:
//! validate configs, compute frame/Bessel verdicts, run analysis and
//! synthesis, certify perturbations, reduce to scalar systems, and
//! replay the built-in reference demos.
//!
//! Exit codes: 0 success (or frame verdict), 2 not-a-frame verdict,
//! 3 inconclusive verdict, 1 usage/parse errors.

mod config;
mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use nugabor_core::bounds::{
    bessel_necessary_check, bessel_sufficient_bound, build_char_matrix, frame_bounds_grid,
    full_report, grid_b0, singular_trace, Verdict,
};
use nugabor_core::demos;
use nugabor_core::gabor::{
    analysis, empirical_frame_ratio, energy, invert_frame_operator, random_test_sequence,
    synthesis, GaborSpec,
};
use nugabor_core::lambda::{LambdaPoint, XiGrid};
use nugabor_core::perturb::{perturbation_report, verify_perturbed};
use nugabor_core::reductions::{
    constant_lift, converse_counterexample, entry_bessel_report, mean_system, row_system,
};
use nugabor_core::sequences::NuSequence;

use config::{CoefficientFile, SignalFile, SystemConfig};
use reports::{to_json, BoundsReportFile, PerturbReportFile, ReduceReportFile};

#[derive(Parser)]
#[command(
    name = "nugabor",
    version,
    about = "Analyze vector-valued Gabor systems on the nonuniform lattice {0, r/N} + 2Z"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a system config, check every invariant, and echo it canonically.
    Validate {
        /// Config path, or demo:<name> for a built-in system
        config: String,
    },
    /// Frame/Bessel verdict with grid bound estimates and cross-checks.
    Bounds {
        config: String,
        /// Base-cell grid resolution Q
        #[arg(long, default_value_t = 256)]
        grid: i64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: i64,
        /// Write the full report as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the per-xi singular-value trace as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Analysis coefficients of a signal against a system.
    Analyze {
        config: String,
        signal: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a signal from a coefficient file.
    Synthesize {
        config: String,
        coeffs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze, synthesize, and invert the frame operator to reproduce the signal.
    Reconstruct {
        config: String,
        signal: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Certify that perturbed windows still generate a frame.
    Perturb {
        /// Base system (must be a frame)
        config_w: String,
        /// Perturbation windows V_j, as a config with the same shape
        config_v: String,
        /// Lower frame bound of the base system (defaults to the grid estimate)
        #[arg(long)]
        a0: Option<f64>,
        /// Upper frame bound of the base system (defaults to the grid estimate)
        #[arg(long)]
        b0: Option<f64>,
        #[arg(long, default_value_t = 256)]
        grid: i64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Reduce to scalar systems: --mode mean | row:<l0> | entries.
    Reduce {
        config: String,
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 256)]
        grid: i64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: i64,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the derived system as a config file
        #[arg(long)]
        emit_config: Option<PathBuf>,
    },
    /// Run a named built-in check end to end; `all` runs every one.
    Demo { name: String },
    /// Write a built-in demo config (tight-frame, perturbed-frame).
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn builtin_config(name: &str) -> Option<SystemConfig> {
    match name {
        "tight-frame" => Some(SystemConfig::from_spec(&demos::tight_frame_spec())),
        "perturbed-frame" => Some(SystemConfig::from_spec(&demos::perturbed_spec())),
        _ => None,
    }
}

/// Loads a config from a path or from `demo:<name>`.
fn load_config(source: &str) -> Result<SystemConfig> {
    if let Some(name) = source.strip_prefix("demo:") {
        return builtin_config(name)
            .with_context(|| format!("unknown demo config `{name}` (try tight-frame, perturbed-frame)"));
    }
    let text = std::fs::read_to_string(source)
        .with_context(|| format!("cannot read config `{source}`"))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse config `{source}`"))
}

fn write_or_print(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .with_context(|| format!("cannot write `{}`", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn verdict_exit(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Frame => ExitCode::SUCCESS,
        Verdict::BesselOnly | Verdict::NotBessel => ExitCode::from(2),
        Verdict::Inconclusive => ExitCode::from(3),
    }
}

fn load_signal(path: &Path, spec: &GaborSpec) -> Result<NuSequence> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read signal `{}`", path.display()))?;
    let file: SignalFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse signal `{}`", path.display()))?;
    if file.s != spec.dim() {
        bail!(
            "signal has S = {}, the system expects S = {}",
            file.s,
            spec.dim()
        );
    }
    file.to_sequence(*spec.params())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Command::Validate { config } => {
            let cfg = load_config(&config)?;
            let spec = cfg.to_spec()?;
            if !spec.has_nonzero_window() {
                bail!("invalid system: every window is the zero sequence");
            }
            print!("{}", SystemConfig::from_spec(&spec).canonical_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            config,
            grid,
            tol,
            seed,
            trials,
            json,
            csv,
        } => {
            let cfg = load_config(&config)?;
            let spec = cfg.to_spec()?;
            let xi_grid = XiGrid::new(*spec.params(), grid)?;
            let results = full_report(&spec, &xi_grid, tol, trials, seed)?;
            println!(
                "verdict: {:?}  A_est = {:.9}  B_est = {:.9}  B0 = {:.6}  sufficient = {:.3}",
                results.verdict, results.a_est, results.b_est, results.b0_grid,
                results.bessel_sufficient
            );
            println!(
                "refinement Q = {} -> {}: stable = {}; empirical [{:.9}, {:.9}] consistent = {}",
                results.resolution,
                results.refinement.resolution,
                results.refinement.stable,
                results.empirical.min_ratio,
                results.empirical.max_ratio,
                results.empirical.consistent
            );
            let verdict = results.verdict;
            if let Some(path) = json {
                let file = BoundsReportFile {
                    command: "bounds",
                    config_digest: cfg.digest(),
                    grid,
                    tol,
                    seed,
                    trials,
                    results,
                };
                write_or_print(Some(&path), &to_json(&file))?;
            }
            if let Some(path) = csv {
                let mut text = String::from("xi,sigma_min,sigma_max\n");
                for (xi, smin, smax) in singular_trace(&spec, &xi_grid) {
                    text.push_str(&format!("{xi},{smin},{smax}\n"));
                }
                write_or_print(Some(&path), &text)?;
            }
            Ok(verdict_exit(verdict))
        }
        Command::Analyze {
            config,
            signal,
            out,
        } => {
            let spec = load_config(&config)?.to_spec()?;
            let z = load_signal(&signal, &spec)?;
            let coeffs = analysis(&spec, &z)?;
            write_or_print(out.as_deref(), &to_json(&CoefficientFile::from_map(&coeffs)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Synthesize {
            config,
            coeffs,
            out,
        } => {
            let spec = load_config(&config)?.to_spec()?;
            let text = std::fs::read_to_string(&coeffs)
                .with_context(|| format!("cannot read coefficients `{}`", coeffs.display()))?;
            let file: CoefficientFile = serde_json::from_str(&text)
                .with_context(|| format!("cannot parse coefficients `{}`", coeffs.display()))?;
            let seq = synthesis(&spec, &file.to_map()?)?;
            write_or_print(out.as_deref(), &to_json(&SignalFile::from_sequence(&seq)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reconstruct {
            config,
            signal,
            out,
            tol,
        } => {
            let spec = load_config(&config)?.to_spec()?;
            let z = load_signal(&signal, &spec)?;
            let resynthesized = synthesis(&spec, &analysis(&spec, &z)?)?;
            let recovered = invert_frame_operator(&spec, &resynthesized, tol)?;
            let residual = recovered
                .add(&z.scale(Complex64::new(-1.0, 0.0)))?
                .norm();
            eprintln!("reconstruction residual: {residual:.3e}");
            write_or_print(out.as_deref(), &to_json(&SignalFile::from_sequence(&recovered)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Perturb {
            config_w,
            config_v,
            a0,
            b0,
            grid,
            tol,
            seed,
            trials,
            json,
        } => {
            let cfg_w = load_config(&config_w)?;
            let cfg_v = load_config(&config_v)?;
            let spec_w = cfg_w.to_spec()?;
            let spec_v = cfg_v.to_spec()?;
            if spec_v.params() != spec_w.params()
                || spec_v.m_count() != spec_w.m_count()
                || spec_v.p_max() != spec_w.p_max()
                || spec_v.dim() != spec_w.dim()
            {
                bail!("perturbation config must match the base system's N, r, M, P and S");
            }
            let xi_grid = XiGrid::new(*spec_w.params(), grid)?;
            let (bounds_source, a0, b0) = match (a0, b0) {
                (Some(a), Some(b)) => ("user", a, b),
                (None, None) => {
                    let (a_est, b_est) = frame_bounds_grid(&spec_w, &xi_grid);
                    if a_est <= tol {
                        bail!(
                            "base system shows no positive lower bound at Q = {grid}; \
                             supply --a0 and --b0 explicitly"
                        );
                    }
                    ("grid-estimate", a_est, b_est)
                }
                _ => bail!("supply both --a0 and --b0, or neither"),
            };
            let results =
                perturbation_report(&spec_w, spec_v.windows(), a0, b0, &xi_grid)?;
            println!(
                "theta = {:.9}  condition = {:.6}  A0 = {:.6}  certified = {}",
                results.theta, results.condition_value, a0, results.certified
            );
            let verification = if results.certified {
                let v = verify_perturbed(&spec_v, &results, trials, seed, tol)?;
                println!(
                    "certified bounds [{:.6}, {:.6}]; perturbed empirical [{:.6}, {:.6}] pass = {}",
                    results.lower, results.upper, v.min_ratio, v.max_ratio, v.pass
                );
                Some(v)
            } else {
                println!("condition 2^(M+P) theta^2 S >= A0: no certificate");
                None
            };
            let certified = results.certified;
            if let Some(path) = json {
                let file = PerturbReportFile {
                    command: "perturb",
                    base_digest: cfg_w.digest(),
                    perturbed_digest: cfg_v.digest(),
                    grid,
                    bounds_source,
                    results,
                    verification,
                };
                write_or_print(Some(&path), &to_json(&file))?;
            }
            Ok(if certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Reduce {
            config,
            mode,
            grid,
            tol,
            seed,
            trials,
            json,
            emit_config,
        } => {
            let cfg = load_config(&config)?;
            let spec = cfg.to_spec()?;
            let xi_grid = XiGrid::new(*spec.params(), grid)?;
            let (derived, entries) = if mode == "mean" {
                (Some(mean_system(&spec)), None)
            } else if let Some(arg) = mode.strip_prefix("row:") {
                let l0: usize = arg
                    .parse()
                    .with_context(|| format!("row index `{arg}` is not an integer"))?;
                if l0 < 1 || l0 > spec.dim() {
                    bail!("row index must be in 1..={}, got {l0}", spec.dim());
                }
                (Some(row_system(&spec, l0 - 1)?), None)
            } else if mode == "entries" {
                (None, Some(entry_bessel_report(&spec, &xi_grid)))
            } else {
                bail!("unknown mode `{mode}`; expected mean, row:<l0> or entries");
            };
            match (derived, entries) {
                (Some(derived), _) => {
                    let results = full_report(&derived, &xi_grid, tol, trials, seed)?;
                    println!(
                        "derived scalar system: verdict {:?}  A_est = {:.9}  B_est = {:.9}",
                        results.verdict, results.a_est, results.b_est
                    );
                    let derived_cfg = SystemConfig::from_spec(&derived);
                    if let Some(path) = emit_config {
                        write_or_print(Some(&path), &derived_cfg.canonical_json())?;
                    }
                    let verdict = results.verdict;
                    if let Some(path) = json {
                        let file = ReduceReportFile {
                            command: "reduce",
                            mode,
                            config_digest: cfg.digest(),
                            grid,
                            derived_config: Some(derived_cfg),
                            frame: Some(results),
                            entries: None,
                        };
                        write_or_print(Some(&path), &to_json(&file))?;
                    }
                    Ok(verdict_exit(verdict))
                }
                (None, Some(entries)) => {
                    println!(
                        "per-entry Bessel estimates: beta0 = {:.9}, aggregate bound = {:.9}",
                        entries.beta0, entries.aggregate_bound
                    );
                    if let Some(path) = json {
                        let file = ReduceReportFile {
                            command: "reduce",
                            mode,
                            config_digest: cfg.digest(),
                            grid,
                            derived_config: None,
                            frame: None,
                            entries: Some(entries),
                        };
                        write_or_print(Some(&path), &to_json(&file))?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                (None, None) => unreachable!(),
            }
        }
        Command::Demo { name } => run_demo(&name),
        Command::Export { name, out } => {
            let cfg = builtin_config(&name).with_context(|| {
                format!("unknown demo config `{name}` (try tight-frame, perturbed-frame)")
            })?;
            write_or_print(out.as_deref(), &cfg.canonical_json())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

struct DemoOutcome {
    failures: usize,
}

impl DemoOutcome {
    fn new() -> Self {
        DemoOutcome { failures: 0 }
    }

    fn check(&mut self, label: &str, pass: bool, detail: String) {
        if pass {
            println!("  [PASS] {label}: {detail}");
        } else {
            self.failures += 1;
            println!("  [FAIL] {label}: {detail}");
        }
    }
}

fn run_demo(name: &str) -> Result<ExitCode> {
    let known = [
        "matrix-identity",
        "bessel-bound",
        "frame-bounds",
        "perturbation",
        "mean-reduction",
        "row-systems",
    ];
    let selected: Vec<&str> = if name == "all" {
        known.to_vec()
    } else if known.contains(&name) {
        vec![name]
    } else {
        bail!(
            "unknown demo `{name}`; expected one of {} or all",
            known.join(", ")
        );
    };
    let mut outcome = DemoOutcome::new();
    for demo in selected {
        println!("demo {demo}:");
        match demo {
            "matrix-identity" => demo_matrix_identity(&mut outcome)?,
            "bessel-bound" => demo_bessel_bound(&mut outcome)?,
            "frame-bounds" => demo_frame_bounds(&mut outcome)?,
            "perturbation" => demo_perturbation(&mut outcome)?,
            "mean-reduction" => demo_mean_reduction(&mut outcome)?,
            "row-systems" => demo_row_systems(&mut outcome)?,
            _ => unreachable!(),
        }
    }
    if outcome.failures == 0 {
        println!("all demo checks passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{} demo check(s) failed", outcome.failures);
        Ok(ExitCode::from(2))
    }
}

fn demo_matrix_identity(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let grid = XiGrid::new(*spec.params(), 256)?;
    let mut max_dev: f64 = 0.0;
    for &xi in grid.base_points() {
        for m in 0..2 {
            for k in 0..2 {
                let mk = build_char_matrix(&spec, m, k, xi)?;
                for kp in 0..2 {
                    let mkp = build_char_matrix(&spec, m, kp, xi)?;
                    let prod = mk.mat.matmul(&mkp.mat.adjoint());
                    for i in 0..8 {
                        for j in 0..8 {
                            let want = if k == kp && i == j { 16.0 } else { 0.0 };
                            max_dev =
                                max_dev.max((prod.get(i, j) - Complex64::new(want, 0.0)).norm());
                        }
                    }
                }
            }
        }
    }
    out.check(
        "translate matrices satisfy M M* = 16 delta I",
        max_dev < 1e-10,
        format!("max deviation {max_dev:.3e}"),
    );
    Ok(())
}

fn demo_bessel_bound(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let grid = XiGrid::new(*spec.params(), 256)?;
    let b0 = grid_b0(&spec, &grid);
    out.check(
        "window transform sup equals 2",
        (b0 - 2.0).abs() <= 1e-3,
        format!("grid B0 = {b0:.6}"),
    );
    let sufficient = bessel_sufficient_bound(&spec, 2.0);
    out.check(
        "sufficient Bessel bound is 4096",
        sufficient == 4096.0,
        format!("2^(M+P) B0^2 S = {sufficient}"),
    );
    let check = bessel_necessary_check(&spec, 4.0, &grid);
    out.check(
        "necessary condition for B = 4",
        check.pass,
        format!("grid B0 {:.6} <= threshold {:.6}", check.grid_b0, check.threshold),
    );
    Ok(())
}

fn demo_frame_bounds(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let grid = XiGrid::new(*spec.params(), 256)?;
    let (a, b) = frame_bounds_grid(&spec, &grid);
    out.check(
        "grid bounds are tight at 4",
        (a - 4.0).abs() <= 1e-9 && (b - 4.0).abs() <= 1e-9,
        format!("A_est = {a:.12}, B_est = {b:.12}"),
    );
    let (lo, hi) = empirical_frame_ratio(&spec, 100, 0)?;
    out.check(
        "brute-force ratios are tight at 4",
        (lo - 4.0).abs() <= 1e-9 && (hi - 4.0).abs() <= 1e-9,
        format!("empirical ratios [{lo:.12}, {hi:.12}]"),
    );
    Ok(())
}

fn demo_perturbation(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let v = demos::perturbing_windows();
    let grid = XiGrid::new(*spec.params(), 256)?;
    let report = perturbation_report(&spec, &v, 4.0, 4096.0, &grid)?;
    out.check(
        "perturbation sup is 1/17",
        (report.theta - 1.0 / 17.0).abs() <= 1e-6,
        format!("theta = {:.9}", report.theta),
    );
    out.check(
        "smallness condition certifies the perturbed frame",
        report.certified && (report.condition_value - 1024.0 / 289.0).abs() <= 1e-9,
        format!("condition {:.6} < 4", report.condition_value),
    );
    let spec_v = demos::perturbed_spec();
    let verification = verify_perturbed(&spec_v, &report, 100, 0, 1e-9)?;
    out.check(
        "perturbed system respects the certified bounds",
        verification.pass,
        format!(
            "empirical [{:.6}, {:.6}] within [{:.6}, {:.6}]",
            verification.min_ratio, verification.max_ratio, report.lower, report.upper
        ),
    );
    Ok(())
}

fn demo_mean_reduction(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let mean = mean_system(&spec);
    let grid = XiGrid::new(*spec.params(), 256)?;
    let (a, b) = frame_bounds_grid(&mean, &grid);
    out.check(
        "mean system is tight at 2",
        (a - 2.0).abs() <= 1e-9 && (b - 2.0).abs() <= 1e-9,
        format!("A_est = {a:.12}, B_est = {b:.12}"),
    );
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let x = random_test_sequence(&mean, &mut rng);
        let lifted = constant_lift(&x, 2)?;
        let parent = energy(&spec, &lifted)?;
        let reduced = energy(&mean, &x)?;
        worst = worst.max((parent - 4.0 * reduced).abs() / (1.0 + parent));
    }
    out.check(
        "lift identity parent = S^2 x mean",
        worst <= 1e-10,
        format!("max relative deviation {worst:.3e}"),
    );
    Ok(())
}

fn demo_row_systems(out: &mut DemoOutcome) -> Result<()> {
    let spec = demos::tight_frame_spec();
    let grid = XiGrid::new(*spec.params(), 256)?;
    for row in 0..2 {
        let rows = row_system(&spec, row)?;
        let (a, b) = frame_bounds_grid(&rows, &grid);
        out.check(
            &format!("row {} system inherits the bound 4", row + 1),
            a >= 4.0 - 1e-6,
            format!("A_est = {a:.12}, B_est = {b:.12}"),
        );
    }
    let scalar = mean_system(&spec);
    let seed = NuSequence::delta(
        *spec.params(),
        1,
        LambdaPoint::origin(),
        0,
        Complex64::new(1.0, 0.0),
    );
    let (tripled, witness) = converse_counterexample(&scalar, &seed)?;
    let e = energy(&tripled, &witness)?;
    out.check(
        "duplicated-coordinate witness has zero energy",
        e == 0.0 && witness.norm() > 0.0,
        format!("energy = {e}, norm = {:.3}", witness.norm()),
    );
    Ok(())
}
