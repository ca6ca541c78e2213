use serde::{Deserialize, Serialize};

use super::density::{lp_distance_with, pullback, DensitySource, PhaseGrid};
use super::map::{lambda_inverse, schedule_map, AffineSymplecticMap};
use crate::error::{check_dim, Error, Result};
use crate::lie::{distance, GroupElement, Mat2};
use crate::schedule::ControlSchedule;
use crate::sim::simulate;
use crate::synth::synthesize;

/// Parameters of the family `ρ0(Φ(q, p))` with `q1 = q + t p + s`,
/// `p1 = p + r (q + t p) + w`, `Φ = (α q1, p1 / α)`. Here `t` and `r` are map
/// parameters, not time or a control.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleTargetParams {
    pub alpha: f64,
    pub t: f64,
    pub r: f64,
    pub s: Vec<f64>,
    pub w: Vec<f64>,
}

impl LiouvilleTargetParams {
    pub fn identity(d: usize) -> Self {
        Self { alpha: 1.0, t: 0.0, r: 0.0, s: vec![0.0; d], w: vec![0.0; d] }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.s.len(), self.w.len())?;
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {}", self.alpha)));
        }
        if ![self.t, self.r].iter().chain(&self.s).chain(&self.w).all(|v| v.is_finite()) {
            return Err(Error::NonFinite("target parameters"));
        }
        Ok(())
    }

    /// Linear part `[[α, αt], [r/α, (1 + tr)/α]]`, determinant 1 identically.
    pub fn linear_part(&self) -> Mat2 {
        let (a, t, r) = (self.alpha, self.t, self.r);
        Mat2::new(a, a * t, r / a, (1.0 + t * r) / a)
    }

    pub fn map(&self) -> Result<AffineSymplecticMap> {
        self.validate()?;
        let q: Vec<f64> = self.s.iter().map(|s| self.alpha * s).collect();
        let p: Vec<f64> = self.w.iter().map(|w| w / self.alpha).collect();
        AffineSymplecticMap::from_block(self.s.len(), &self.linear_part(), &q, &p)
    }

    /// Group element whose classical image is [`Self::map`] (centre and winding 0).
    pub fn group_target(&self) -> Result<GroupElement> {
        lambda_inverse(&self.map()?).ok_or_else(|| Error::InvalidArgument("target map is not blockwise".into()))
    }
}

pub fn build_target(rho0: &DensitySource, params: &LiouvilleTargetParams, grid: &PhaseGrid) -> Result<PhaseGrid> {
    pullback(rho0, &params.map()?, grid)
}

#[derive(Clone, Copy, Debug)]
pub struct LiouvilleReachOptions {
    pub eps0: f64,
    pub max_iter: usize,
}

impl Default for LiouvilleReachOptions {
    fn default() -> Self {
        Self { eps0: 0.1, max_iter: 20 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiouvilleReport {
    pub params: LiouvilleTargetParams,
    pub target: GroupElement,
    pub schedule: ControlSchedule,
    pub map: AffineSymplecticMap,
    pub epsilon: f64,
    pub iterations: usize,
    pub group_error: f64,
    /// Distance in the grid's exponent.
    pub error: f64,
    pub l1_error: f64,
    pub l2_error: f64,
    pub mass_error: f64,
    pub tolerance: f64,
    pub total_time: f64,
    pub passed: bool,
}

/// Plans a schedule for the group preimage of the target map, transports
/// `rho0` through its exact flow and compares with [`build_target`];
/// `eps` is halved until the Lᵖ error (grid exponent) meets `tol`.
pub fn reach_experiment(
    rho0: &DensitySource,
    params: &LiouvilleTargetParams,
    grid: &PhaseGrid,
    tol: f64,
    opts: LiouvilleReachOptions,
) -> Result<LiouvilleReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let target_density = build_target(rho0, params, grid)?;
    let g = params.group_target()?;
    let mut eps = opts.eps0;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let schedule = synthesize(&g, eps)?;
        let group_error = distance(&simulate(&schedule)?, &g)?;
        let map = schedule_map(&schedule)?;
        let moved = pullback(rho0, &map, grid)?;
        let error = lp_distance_with(&moved, &target_density, grid.p)?;
        let done = error <= tol || iterations >= opts.max_iter.max(1);
        if done {
            return Ok(LiouvilleReport {
                params: params.clone(),
                target: g,
                l1_error: lp_distance_with(&moved, &target_density, 1.0)?,
                l2_error: lp_distance_with(&moved, &target_density, 2.0)?,
                mass_error: (moved.mass() - rho0.mass()).abs(),
                total_time: schedule.total_time(),
                schedule,
                map,
                epsilon: eps,
                iterations,
                group_error,
                error,
                tolerance: tol,
                passed: error <= tol,
            });
        }
        eps *= 0.5;
    }
}
