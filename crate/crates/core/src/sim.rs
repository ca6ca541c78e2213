//! Exact integration of the left-invariant system under piecewise-constant
//! controls, and ε-sweeps of synthesized schedules.

use std::fmt::Write as _;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lie::{distance, exp, multiply, GroupElement};
use crate::numfmt::f17;
use crate::schedule::ControlSchedule;

/// `exp(dt_1 A_1) exp(dt_2 A_2) ⋯` with earlier segments as left factors.
pub fn simulate(schedule: &ControlSchedule) -> Result<GroupElement> {
    schedule.validate()?;
    schedule.segments.iter().try_fold(GroupElement::identity(schedule.d), |q, seg| {
        multiply(&q, &exp(&seg.generator())?)
    })
}

/// Simulates from `start` (left translation of the identity trajectory).
pub fn simulate_from(start: &GroupElement, schedule: &ControlSchedule) -> Result<GroupElement> {
    check_dim(start.d, schedule.d)?;
    multiply(start, &simulate(schedule)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub error: f64,
    pub total_time: f64,
    pub max_amplitude: f64,
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,error,total_time,max_amplitude";

fn sweep_row<F>(target: &GroupElement, recipe: &F, eps: f64) -> Result<SweepRow>
where
    F: Fn(f64) -> Result<ControlSchedule>,
{
    let sched = recipe(eps)?;
    let reached = simulate(&sched)?;
    Ok(SweepRow {
        epsilon: eps,
        error: distance(&reached, target)?,
        total_time: sched.total_time(),
        max_amplitude: sched.max_amplitude(),
    })
}

/// One row per ε, in input order. `jobs > 1` evaluates rows on scoped threads.
pub fn sweep<F>(target: &GroupElement, recipe: F, eps_list: &[f64], jobs: usize) -> Result<Vec<Result<SweepRow>>>
where
    F: Fn(f64) -> Result<ControlSchedule> + Sync,
{
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("sweep needs positive ε values".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("sweep ε list must be strictly decreasing".into()));
    }
    let jobs = jobs.max(1).min(eps_list.len());
    if jobs == 1 {
        return Ok(eps_list.iter().map(|&e| sweep_row(target, &recipe, e)).collect());
    }
    let recipe = &recipe;
    let rows = thread::scope(|scope| {
        let handles: Vec<_> = eps_list
            .chunks(eps_list.len().div_ceil(jobs))
            .map(|chunk| scope.spawn(move || chunk.iter().map(|&e| sweep_row(target, recipe, e)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", f17(r.epsilon), f17(r.error), f17(r.total_time), f17(r.max_amplitude));
    }
    out
}

/// Least-squares slope of `ln(error)` against `ln(ε)`.
pub fn loglog_slope(rows: &[SweepRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon.ln(), r.error.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
