//! `conedist` command-line tool.
//!
//! Exit codes: 0 when every solve converged, 2 when a solve hit the iteration
//! cap or its master program failed, 1 on any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use conedist::angles::{Method, Status};
use conedist::classify::{self, ProtocolOptions, SyntheticSpec};
use conedist::cones::DEFAULT_RIM;
use conedist::distance::dis_from_angles;
use conedist::io::{format_rows, read_cone};
use conedist::linalg::{dot, normalized};
use conedist::oracle::{sweep_theta_2d, sweep_theta_hat_2d};
use conedist::sampling::{random_generators, EntryDist};
use conedist::{theta, theta_hat, AngleResult, Cone, NormKind, SolverConfig};

#[derive(Parser)]
#[command(
    name = "conedist",
    version,
    about = "Max-min angles and distances between convex cones"
)]
struct Cli {
    /// Worker threads (default: one per logical core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write a JSON run record with per-stage wall-clock times.
    #[arg(long, global = true)]
    record: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Max-min angle Θ(P, Q).
    Angle {
        /// Cone file: CSV generators or JSON description.
        p: PathBuf,
        /// Cone file: CSV generators or JSON description.
        q: PathBuf,
        /// Compute the min-max angle π − Θ(P, −Q) instead.
        #[arg(long)]
        hat: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Distance Dis_r(P, Q) from the two directional angles.
    Dist {
        /// Cone file: CSV generators or JSON description.
        p: PathBuf,
        /// Cone file: CSV generators or JSON description.
        q: PathBuf,
        #[arg(long, default_value = "2", value_parser = parse_norm)]
        r: NormKind,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Random polyhedral cone as CSV.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, value_enum, default_value_t = Dist::Normal)]
        dist: Dist,
        #[arg(long, env = "CONEDIST_SEED", default_value_t = 0)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotating hold-out classification of a feature dataset.
    Classify {
        #[arg(long)]
        manifest: PathBuf,
        /// Training objects per class; comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value = "2", value_parser = parse_norm)]
        r: NormKind,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Report JSON (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accuracy table, rows = k, columns = classes.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Writes a synthetic nonnegative feature dataset with its manifest.
    GenDataset {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        classes: usize,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        objects: usize,
        #[arg(long, default_value_t = 20)]
        features: usize,
        #[arg(long, default_value_t = 0.5)]
        noise: f64,
        #[arg(long, env = "CONEDIST_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, env = "CONEDIST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Local)]
    mode: Mode,
    /// Grid size of the planar sweep used by `--mode oracle`.
    #[arg(long, default_value_t = 20_000)]
    oracle_grid: usize,
    /// Rim generators used when a revolution cone must be made polyhedral.
    #[arg(long, default_value_t = DEFAULT_RIM)]
    rim: usize,
    /// Report angles in degrees.
    #[arg(long)]
    degrees: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            restarts: self.restarts,
            seed: self.seed,
            rim: self.rim,
            ..SolverConfig::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Closed forms or the cutting-plane solver.
    Local,
    /// Brute-force planar sweep.
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Normal,
    Uniform,
}

fn parse_norm(s: &str) -> std::result::Result<NormKind, String> {
    s.parse().map_err(|e: conedist::ConeError| e.to_string())
}

/// Rounds to 9 significant digits.
fn sig(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.8e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn sig_vec(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| sig(x)).collect()
}

#[derive(Serialize)]
struct AngleOut {
    theta: f64,
    units: &'static str,
    cos: f64,
    u: Vec<f64>,
    v: Vec<f64>,
    gap: f64,
    residual: Option<f64>,
    iters: usize,
    status: Status,
    method: Method,
}

impl AngleOut {
    fn new(a: &AngleResult, degrees: bool) -> Self {
        Self {
            theta: sig(if degrees {
                a.angle.to_degrees()
            } else {
                a.angle
            }),
            units: if degrees { "deg" } else { "rad" },
            cos: sig(a.cos_value),
            u: sig_vec(&a.u),
            v: sig_vec(&a.v),
            gap: sig(a.gap),
            residual: a.stationarity_residual.map(sig),
            iters: a.iterations,
            status: a.status,
            method: a.method,
        }
    }
}

#[derive(Serialize)]
struct DistOut {
    r: NormKind,
    value: f64,
    theta_pq: AngleOut,
    theta_qp: AngleOut,
}

#[derive(Serialize)]
struct Stage {
    name: &'static str,
    seconds: f64,
}

#[derive(Serialize)]
struct RunRecord {
    command: String,
    arguments: Vec<String>,
    seed: Option<u64>,
    stages: Vec<Stage>,
    outputs: serde_json::Value,
}

struct Timer {
    stages: Vec<Stage>,
    last: Instant,
}

impl Timer {
    fn new() -> Self {
        Self {
            stages: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.stages.push(Stage {
            name,
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

fn load(path: &Path) -> Result<Cone> {
    Ok(read_cone(path)?)
}

fn check_planar(p: &Cone, q: &Cone) -> Result<()> {
    if p.dim() != 2 || q.dim() != 2 {
        bail!(
            "--mode oracle needs cones in the plane, got dimensions {} and {}",
            p.dim(),
            q.dim()
        );
    }
    Ok(())
}

/// Sweep estimate packaged as an [`AngleResult`]; `gap` carries the grid error bound.
fn oracle_angle(p: &Cone, q: &Cone, hat: bool, args: &SolverArgs) -> Result<AngleResult> {
    check_planar(p, q)?;
    let pp = p.to_polyhedral(args.rim)?;
    let rep = if hat {
        sweep_theta_hat_2d(&pp, q, args.oracle_grid)?
    } else {
        sweep_theta_2d(&pp, q, args.oracle_grid)?
    };
    let u = rep.argmax.clone();
    let v = if hat {
        let (_, w) = q
            .negated()
            .support_value(&u.iter().map(|x| -x).collect::<Vec<_>>())?;
        w.iter().map(|x| -x).collect::<Vec<_>>()
    } else {
        q.support_value(&u)?.1
    };
    Ok(AngleResult {
        cos_value: rep.theta_estimate.cos(),
        angle: rep.theta_estimate,
        model_value: dot(&u, &v),
        u,
        v,
        gap: rep.delta,
        iterations: rep.grid_size,
        stationarity_residual: None,
        status: Status::Converged,
        method: Method::Oracle,
    })
}

fn compute_angle(p: &Cone, q: &Cone, hat: bool, args: &SolverArgs) -> Result<AngleResult> {
    match args.mode {
        Mode::Oracle => oracle_angle(p, q, hat, args),
        Mode::Local => {
            let cfg = args.config();
            Ok(if hat {
                theta_hat(p, q, &cfg)?
            } else {
                theta(p, q, &cfg)?
            })
        }
    }
}

fn status_code(statuses: &[Status]) -> u8 {
    if statuses.iter().all(|&s| s == Status::Converged) {
        0
    } else {
        2
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("starting the worker pool")?;
    }
    let mut timer = Timer::new();
    let (name, seed, code, outputs) = match &cli.command {
        Command::Angle { p, q, hat, solver } => {
            let (p, q) = (load(p)?, load(q)?);
            timer.lap("load");
            let res = compute_angle(&p, &q, *hat, solver)?;
            timer.lap("solve");
            let out = AngleOut::new(&res, solver.degrees);
            print!("{}", to_json(&out));
            (
                "angle",
                Some(solver.seed),
                status_code(&[res.status]),
                serde_json::to_value(&out)?,
            )
        }
        Command::Dist { p, q, r, solver } => {
            let (p, q) = (load(p)?, load(q)?);
            timer.lap("load");
            let (pq, qp) = rayon::join(
                || compute_angle(&p, &q, false, solver),
                || compute_angle(&q, &p, false, solver),
            );
            let (pq, qp) = (pq?, qp?);
            timer.lap("solve");
            let value = dis_from_angles(pq.angle, qp.angle, *r);
            let out = DistOut {
                r: *r,
                value: sig(value),
                theta_pq: AngleOut::new(&pq, solver.degrees),
                theta_qp: AngleOut::new(&qp, solver.degrees),
            };
            print!("{}", to_json(&out));
            (
                "dist",
                Some(solver.seed),
                status_code(&[pq.status, qp.status]),
                serde_json::to_value(&out)?,
            )
        }
        Command::Gen {
            n,
            p,
            density,
            dist,
            seed,
            out,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let entry = match dist {
                Dist::Normal => EntryDist::Normal,
                Dist::Uniform => EntryDist::Uniform,
            };
            let gens: Vec<Vec<f64>> = random_generators(&mut rng, *n, *p, *density, entry)?
                .iter()
                .map(|g| normalized(g).expect("nonzero generator"))
                .collect();
            timer.lap("generate");
            write_or_print(out.as_deref(), &format_rows(&gens))?;
            let outputs = serde_json::json!({ "file": out, "generators": gens.len() });
            ("gen", Some(*seed), 0, outputs)
        }
        Command::Classify {
            manifest,
            k,
            r,
            trials,
            out,
            csv,
            solver,
        } => {
            if solver.mode == Mode::Oracle {
                bail!("classify supports only --mode local");
            }
            let ds = classify::load_dataset(manifest)?;
            timer.lap("load");
            let opts = ProtocolOptions {
                ks: k.clone(),
                trials: *trials,
                r: *r,
                seed: solver.seed,
                solver: solver.config(),
                timing: cli.record.is_some(),
            };
            let mut report = classify::evaluate_protocol(&ds, &opts)?;
            timer.lap("protocol");
            // Timings go to the run record only, so the report stays reproducible.
            let pair_seconds = report.pair_seconds.take();
            write_or_print(out.as_deref(), &to_json(&report))?;
            if let Some(path) = csv {
                fs::write(path, report.accuracy_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let unconverged: usize = report
                .per_k
                .iter()
                .flat_map(|k| &k.predictions)
                .map(|p| p.unconverged)
                .sum();
            let outputs = serde_json::json!({
                "report": out,
                "csv": csv,
                "accuracy": report.per_k.iter().map(|k| (k.k, k.accuracy)).collect::<Vec<_>>(),
                "unconverged_angles": unconverged,
                "pair_seconds": pair_seconds,
            });
            (
                "classify",
                Some(solver.seed),
                if unconverged == 0 { 0 } else { 2 },
                outputs,
            )
        }
        Command::GenDataset {
            out,
            classes,
            dim,
            objects,
            features,
            noise,
            seed,
        } => {
            let spec = SyntheticSpec {
                classes: *classes,
                dim: *dim,
                objects: *objects,
                features: *features,
                noise: *noise,
            };
            let ds = classify::synthetic_dataset(&spec, *seed)?;
            timer.lap("generate");
            let manifest = classify::write_dataset(&ds, out)?;
            timer.lap("write");
            println!("{}", manifest.display());
            (
                "gen-dataset",
                Some(*seed),
                0,
                serde_json::json!({ "manifest": manifest }),
            )
        }
    };
    if let Some(path) = &cli.record {
        let record = RunRecord {
            command: name.to_string(),
            arguments: std::env::args().skip(1).collect(),
            seed,
            stages: timer.stages,
            outputs,
        };
        fs::write(path, to_json(&record)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    // Usage errors exit with 1; clap's own code 2 means non-convergence here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
