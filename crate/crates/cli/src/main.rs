mod algebra;
mod target;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use reachkit::lie::{distance, iwasawa, GroupElement};
use reachkit::liouville::{self, DensitySource, LiouvilleReachOptions, LiouvilleTargetParams, PhaseGrid};
use reachkit::numfmt::to_json;
use reachkit::quantum::{self, GridShape, QuantumReachOptions, QuantumTargetParams, WaveGrid};
use reachkit::schedule::ControlSchedule;
use reachkit::sim::{simulate, sweep, sweep_csv, SweepRow};
use reachkit::synth::plan_target;
use serde_json::{json, Value};

use crate::target::{parse_list, parse_matrix, parse_target, sweep_recipe, PRESETS};

/// Controllability toolkit for the oscillator group: algebra checks,
/// decomposition, schedule synthesis and reachability experiments.
#[derive(Parser)]
#[command(name = "reachkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Number of Heisenberg pairs.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Write the report here (CSV for `sweep`); it is always printed to stdout too.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Residuals of the bracket table and the Ad identities.
    CheckAlgebra {
        #[command(flatten)]
        common: Common,
        /// Seed for the randomized identities.
        #[arg(long, default_value_t = algebra::DEFAULT_SEED)]
        seed: u64,
    },
    /// Iwasawa factors (t1, t2, t3) of a unimodular 2×2 matrix.
    Iwasawa {
        #[command(flatten)]
        common: Common,
        /// Row-major entries m11,m12,m21,m22.
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Plan a control schedule reaching a group element.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long, help = format!("Preset ({PRESETS}), exp:<coefficients>, matrix:<entries> or a group-element JSON file"))]
        target: String,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        /// Starting ε; halved until the tolerance is met.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 30)]
        max_iter: usize,
    },
    /// Integrate a schedule on the group.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Schedule JSON, or any report that embeds one.
        #[arg(long)]
        schedule: PathBuf,
        /// Compare the endpoint with this target.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, requires = "target")]
        tol: Option<f64>,
    },
    /// Drive a Gaussian wavefunction to a member of the reachable family.
    QuantumReach {
        #[command(flatten)]
        common: Common,
        /// s,α,p…,σ,β… (2 + 2d + 1 numbers); defaults to the shear-and-squeeze example.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Grid points per axis [default: 32768 for d = 1, 512 otherwise].
        #[arg(long)]
        grid_n: Option<usize>,
        /// Box half-width [default: 8].
        #[arg(long, default_value_t = 8.0)]
        grid_l: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt_max: f64,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Initial state (binary wave file); default is the oscillator ground state.
        #[arg(long)]
        wave_in: Option<PathBuf>,
        /// Write the propagated state here.
        #[arg(long)]
        wave_out: Option<PathBuf>,
    },
    /// Transport a phase-space density to a member of the reachable family.
    LiouvilleReach {
        #[command(flatten)]
        common: Common,
        /// α,t,r,s,w; defaults to the squeeze-shear-shift example.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Cells per axis.
        #[arg(long, default_value_t = 768)]
        grid_n: usize,
        /// Box half-width.
        #[arg(long, default_value_t = 12.0)]
        grid_l: f64,
        /// Lᵖ exponent of the reported distance.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// `gaussian`, `ring`, or a density file.
        #[arg(long, default_value = "gaussian")]
        source: String,
        /// Write the transported density here.
        #[arg(long)]
        density_out: Option<PathBuf>,
    },
    /// Error, duration and amplitude of a recipe across ε.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        target: String,
        /// Strictly decreasing ε values.
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Fail unless the smallest-ε error is within this bound.
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// Outcome of a command that ran to completion.
struct Report {
    json: Value,
    csv: Option<String>,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Numerical breakdowns count as tolerance failures; everything else is bad input.
fn exit_code(e: &anyhow::Error) -> u8 {
    use reachkit::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::Aliasing { .. } | E::SupportEscape(_) | E::NonFinite(_) | E::Correspondence(_)) => 1,
        _ => 2,
    }
}

fn run(cmd: Command) -> Result<bool> {
    let (common, report) = match cmd {
        Command::CheckAlgebra { common, seed } => {
            let r = algebra::check(common.d, seed)?;
            (common, r)
        }
        Command::Iwasawa { common, matrix } => {
            let r = cmd_iwasawa(&matrix)?;
            (common, r)
        }
        Command::Synth { common, target, tol, eps, max_iter } => {
            let g = parse_target(&target, common.d)?;
            let rep = plan_target(&g, tol, eps, max_iter)?;
            let passed = rep.converged;
            (common, Report { json: serde_json::to_value(&rep)?, csv: None, passed })
        }
        Command::Simulate { common, schedule, target, tol } => {
            let r = cmd_simulate(&schedule, target.as_deref(), tol)?;
            (common, r)
        }
        Command::QuantumReach { common, params, grid_n, grid_l, dt_max, tol, eps, wave_in, wave_out } => {
            let d = common.d;
            let n = grid_n.unwrap_or(if d == 1 { 32768 } else { 512 });
            let psi0 = match &wave_in {
                Some(p) => quantum::read_wave(p)?,
                None => WaveGrid::ground_state(GridShape::new(d, grid_l, n)?),
            };
            let params = match params {
                Some(s) => quantum_params(psi0.d, &parse_list(&s)?)?,
                None => default_quantum_params(psi0.d),
            };
            let opts = QuantumReachOptions { eps0: eps, dt_max, ..Default::default() };
            let rep = quantum::reach_experiment(&psi0, &params, tol, opts)?;
            if let Some(p) = &wave_out {
                let moved = quantum::propagate_with(&psi0, &rep.schedule, quantum::StepOptions::exact(dt_max), &quantum::Spectral::new(psi0.shape()))?;
                quantum::write_wave(p, &moved)?;
            }
            let passed = rep.passed;
            (common, Report { json: serde_json::to_value(&rep)?, csv: None, passed })
        }
        Command::LiouvilleReach { common, params, grid_n, grid_l, p, tol, eps, source, density_out } => {
            if common.d != 1 {
                bail!("liouville-reach supports d = 1 only");
            }
            let params = match params {
                Some(s) => liouville_params(&parse_list(&s)?)?,
                None => LiouvilleTargetParams { alpha: 2.0, t: 0.3, r: -0.4, s: vec![0.1], w: vec![0.2] },
            };
            let rho0 = density_source(&source)?;
            let grid = PhaseGrid::new([[-grid_l, grid_l], [-grid_l, grid_l]], [grid_n, grid_n], p)?;
            let opts = LiouvilleReachOptions { eps0: eps, ..Default::default() };
            let rep = liouville::reach_experiment(&rho0, &params, &grid, tol, opts)?;
            if let Some(path) = &density_out {
                liouville::write_density(path, &liouville::pullback(&rho0, &rep.map, &grid)?)?;
            }
            let passed = rep.passed;
            (common, Report { json: serde_json::to_value(&rep)?, csv: None, passed })
        }
        Command::Sweep { common, target, eps, jobs, tol } => {
            let r = cmd_sweep(&target, common.d, &eps, jobs, tol)?;
            (common, r)
        }
    };
    println!("{}", to_json(&report.json, true)?);
    if let Some(path) = &common.out {
        let body = match &report.csv {
            Some(csv) => csv.clone(),
            None => to_json(&report.json, true)? + "\n",
        };
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.passed)
}

fn cmd_iwasawa(matrix: &str) -> Result<Report> {
    let m = parse_matrix(matrix)?;
    let f = iwasawa(&m)?;
    let back = f.recompose();
    let recompose_error = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (back.0[i][j] - m.0[i][j]).abs())
        .fold(0.0, f64::max);
    Ok(Report {
        json: json!({ "matrix": m.0, "t1": f.t1, "t2": f.t2, "t3": f.t3, "recompose_error": recompose_error }),
        csv: None,
        passed: true,
    })
}

fn read_schedule(path: &Path) -> Result<ControlSchedule> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    if let Some(inner) = v.get_mut("schedule") {
        v = inner.take();
    }
    let sched: ControlSchedule = serde_json::from_value(v).with_context(|| format!("{} holds no schedule", path.display()))?;
    sched.validate()?;
    Ok(sched)
}

fn cmd_simulate(path: &Path, target: Option<&str>, tol: Option<f64>) -> Result<Report> {
    let sched = read_schedule(path)?;
    let reached = simulate(&sched)?;
    let mut json = json!({
        "schedule": sched,
        "reached": reached,
        "total_time": sched.total_time(),
        "max_amplitude": sched.max_amplitude(),
    });
    let mut passed = true;
    if let Some(spec) = target {
        let g: GroupElement = parse_target(spec, sched.d)?;
        let error = distance(&reached, &g)?;
        passed = tol.is_none_or(|t| error <= t);
        json["target"] = serde_json::to_value(&g)?;
        json["error"] = json!(error);
        json["tolerance"] = json!(tol);
        json["passed"] = json!(passed);
    }
    Ok(Report { json, csv: None, passed })
}

fn cmd_sweep(spec: &str, d: usize, eps: &[f64], jobs: usize, tol: Option<f64>) -> Result<Report> {
    let g = parse_target(spec, d)?;
    let rows: Vec<SweepRow> = sweep(&g, sweep_recipe(spec, d, &g), eps, jobs)?
        .into_iter()
        .collect::<reachkit::Result<_>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    let final_error = rows.last().map_or(f64::INFINITY, |r| r.error);
    let within = tol.is_none_or(|t| final_error <= t);
    Ok(Report {
        json: json!({
            "target": g,
            "rows": rows,
            "strictly_decreasing": decreasing,
            "final_error": final_error,
            "tolerance": tol,
            "passed": decreasing && within,
        }),
        csv: Some(sweep_csv(&rows)),
        passed: decreasing && within,
    })
}

fn default_quantum_params(d: usize) -> QuantumTargetParams {
    let mut p = QuantumTargetParams::identity(d);
    p.s = 0.1;
    p.alpha = 0.3;
    p.sigma = 2.0;
    p.p[0] = 0.5;
    p.beta[0] = 1.0;
    p
}

fn quantum_params(d: usize, v: &[f64]) -> Result<QuantumTargetParams> {
    if v.len() != 3 + 2 * d {
        bail!("--params for d = {d} needs s,α,p1..p{d},σ,β1..β{d} ({} numbers), got {}", 3 + 2 * d, v.len());
    }
    let p = QuantumTargetParams {
        s: v[0],
        alpha: v[1],
        p: v[2..2 + d].to_vec(),
        sigma: v[2 + d],
        beta: v[3 + d..].to_vec(),
    };
    p.validate()?;
    Ok(p)
}

fn liouville_params(v: &[f64]) -> Result<LiouvilleTargetParams> {
    if v.len() != 5 {
        bail!("--params needs α,t,r,s,w (5 numbers), got {}", v.len());
    }
    let p = LiouvilleTargetParams { alpha: v[0], t: v[1], r: v[2], s: vec![v[3]], w: vec![v[4]] };
    p.validate()?;
    Ok(p)
}

fn density_source(spec: &str) -> Result<DensitySource> {
    let src = match spec {
        "gaussian" => DensitySource::standard_gaussian(),
        "ring" => DensitySource::Ring { center: [0.0, 0.0], radius: 2.0, width: 0.3 },
        path => DensitySource::Grid(liouville::read_density(path).with_context(|| format!("reading density {path}"))?),
    };
    src.validate()?;
    Ok(src)
}
