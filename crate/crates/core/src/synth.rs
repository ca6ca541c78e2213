//! Piecewise-constant schedules realizing the conjugation recipes behind
//! small-time reachability on `SL2 ⋉ H_d`, and a closed-loop planner for
//! arbitrary group targets.
//!
//! Every recipe takes an accuracy parameter `eps`; simulated endpoints
//! converge to the recipe's target as `eps -> 0` while the total duration
//! shrinks and the control amplitudes grow without bound.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lie::{distance, iwasawa, GroupElement};
use crate::schedule::{ControlSchedule, ControlSegment};
use crate::sim::simulate;

/// Directions that the controls drive directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseAxis {
    B,
    /// `X_i`, zero-based.
    X(usize),
    Z,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
    }
}

fn segment(d: usize, dt: f64, u0: f64, r: f64) -> ControlSegment {
    ControlSegment::new(dt, u0, vec![0.0; d], r)
}

/// Duration of a pulse of the given strength so that its drift pollution
/// stays `O(eps)` after the conjugations it takes part in.
pub fn pulse_duration(strength: f64, eps: f64) -> f64 {
    eps / (1.0 + strength * strength)
}

/// Single segment of length `eps` with the control on `axis` set to `amount / eps`.
pub fn pulse(d: usize, axis: PulseAxis, amount: f64, eps: f64) -> Result<ControlSchedule> {
    positive("eps", eps)?;
    let mut seg = segment(d, eps, 0.0, 0.0);
    match axis {
        PulseAxis::B => seg.u0 = amount / eps,
        PulseAxis::Z => seg.r = amount / eps,
        PulseAxis::X(i) => {
            if i >= d {
                return Err(Error::InvalidArgument(format!("axis X{} out of range for d = {d}", i + 1)));
            }
            seg.u[i] = amount / eps;
        }
    }
    Ok(ControlSchedule::single(d, seg))
}

/// Free evolution for `tau`; realizes `exp(tau a)` exactly.
pub fn drift(d: usize, tau: f64) -> Result<ControlSchedule> {
    positive("tau", tau)?;
    Ok(ControlSchedule::single(d, segment(d, tau, 0.0, 0.0)))
}

/// `e^{vb} e^{tau (a + v^2 b)} e^{-vb} = e^{tau a + r c}` with `v = r / tau`.
/// The b-kicks are pulses of length [`pulse_duration`]`(v, eps)`, so the
/// endpoint is within `O(eps)` of `exp(tau a + r c)`.
pub fn recipe_c(d: usize, r: f64, tau: f64, eps: f64) -> Result<ControlSchedule> {
    positive("tau", tau)?;
    positive("eps", eps)?;
    let v = r / tau;
    ControlSchedule::concat(
        [
            pulse(d, PulseAxis::B, v, pulse_duration(v, eps))?,
            ControlSchedule::single(d, segment(d, tau, v * v, 0.0)),
            pulse(d, PulseAxis::B, -v, pulse_duration(v, eps))?,
        ],
        d,
    )
}

/// `e^{vX_i} e^{tau (a + (v^2/2) Z)} e^{-vX_i} = e^{tau a + eta Y_i}` with
/// `v = -eta / tau`. The central control cancels the `Z` term of the
/// conjugation; since `Z` is central, the residual picked up by the finite
/// pulses is measured and folded into the same control.
pub fn recipe_y(d: usize, i: usize, eta: f64, tau: f64, eps: f64) -> Result<ControlSchedule> {
    positive("tau", tau)?;
    positive("eps", eps)?;
    if i >= d {
        return Err(Error::InvalidArgument(format!("axis Y{} out of range for d = {d}", i + 1)));
    }
    let v = -eta / tau;
    let build = |r: f64| -> Result<ControlSchedule> {
        ControlSchedule::concat(
            [
                pulse(d, PulseAxis::X(i), v, pulse_duration(v, eps))?,
                ControlSchedule::single(d, segment(d, tau, 0.0, r)),
                pulse(d, PulseAxis::X(i), -v, pulse_duration(v, eps))?,
            ],
            d,
        )
    };
    let r = v * v / 2.0;
    let residual = simulate(&build(r)?)?.z;
    build(r - residual / tau)
}

/// Dilation `e^{r c}` synthesized by [`recipe_c`] with flight time `tau`.
/// The exact endpoint is `e^{rc} e^{k a} = e^{k' a} e^{rc}`; returns the
/// schedule together with `k` (for `r`) which equals `k'` for `-r`.
fn dilation(d: usize, r: f64, tau: f64, eps: f64) -> Result<(ControlSchedule, f64)> {
    let sched = recipe_c(d, r, tau, eps)?;
    Ok((sched, tau * exp_minus_one_ratio(2.0 * r)))
}

// (e^x - 1) / x, stable near 0
fn exp_minus_one_ratio(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 + x / 2.0
    } else {
        x.exp_m1() / x
    }
}

/// `exp(w a)` for `w > 0` in time `O(eps)`: a free flight of length
/// `tau' <= eps` conjugated by the dilation `e^{vc}`, `e^{-2v} tau' = w`.
pub fn recipe_scaled_drift(d: usize, w: f64, eps: f64) -> Result<ControlSchedule> {
    positive("w", w)?;
    positive("eps", eps)?;
    if w <= eps {
        return drift(d, w);
    }
    let flight = eps;
    let v = -0.5 * (w / flight).ln();
    let tau_c = flight / 4.0;
    let (left, k) = dilation(d, v, tau_c, eps)?;
    let (right, _) = dilation(d, -v, tau_c, eps)?;
    // the conjugators each carry a free flight of k (see `dilation`)
    let middle = drift(d, flight - 2.0 * k)?;
    ControlSchedule::concat([left, middle, right], d)
}

/// `exp(theta (a - b))` for `theta >= 0` in time `O(eps)`: the segment
/// `s (a - e^{-4v} b)` with `s = theta e^{2v} <= eps`, conjugated by `e^{vc}`.
pub fn recipe_rotation(d: usize, theta: f64, eps: f64) -> Result<ControlSchedule> {
    recipe_rotation_with(d, theta, eps, ROTATION_CONJUGATOR_TIME)
        .or_else(|_| recipe_rotation_with(d, theta, eps, ROTATION_CONJUGATOR_TIME / 4.0))
}

/// Conjugator flight time of [`recipe_rotation`] in units of `eps`. The drift
/// it carries is compensated exactly, so it only trades total time against
/// the strength of the b-kicks (`|v| / tau_c`). Too long a flight leaves
/// no elliptic middle segment; [`recipe_rotation`] then retries shorter.
pub const ROTATION_CONJUGATOR_TIME: f64 = 1.0;

pub fn recipe_rotation_with(d: usize, theta: f64, eps: f64, conj_time: f64) -> Result<ControlSchedule> {
    positive("eps", eps)?;
    positive("conjugator time", conj_time)?;
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rotation angle must be finite and nonnegative, got {theta}"
        )));
    }
    if theta == 0.0 {
        return Ok(ControlSchedule::empty(d));
    }
    if theta <= eps {
        return Ok(ControlSchedule::single(d, segment(d, theta, -1.0, 0.0)));
    }
    let s = eps;
    let v = 0.5 * (s / theta).ln();
    let beta = (-4.0 * v).exp();
    let tau_c = conj_time * eps;
    let (left, k) = dilation(d, v, tau_c, eps)?;
    let (right, _) = dilation(d, -v, tau_c, eps)?;

    // Middle segment M' with e^{ka} M' e^{ka} = exp(s (a - beta b)).
    let omega_star = s * beta.sqrt();
    let (c, sn) = (omega_star.cos(), omega_star.sin() / omega_star);
    let (m11, m12, m21) = (c, s * sn, -s * beta * sn);
    // e^{-ka} M e^{-ka}: diagonal entries stay equal
    let diag = c - k * m21;
    let upper = m12 - k * (c + diag);
    let lower = m21;
    let _ = m11;
    let mut omega = diag.clamp(-1.0, 1.0).acos();
    if (omega - theta).abs() > (std::f64::consts::TAU - omega - theta).abs() {
        omega = std::f64::consts::TAU - omega;
    }
    let dur = omega * (-upper / lower).sqrt();
    let u0 = -omega * omega / (dur * dur);
    if !(dur > 0.0) || !dur.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rotation recipe degenerate for theta = {theta}, eps = {eps}"
        )));
    }
    let middle = ControlSchedule::single(d, segment(d, dur, u0, 0.0));
    ControlSchedule::concat([left, middle, right], d)
}

/// Word of `X_i` pulses, `Y_i` recipes and a `Z` pulse realizing `(I, (ξ, η), ζ)`
/// in the `eps -> 0` limit. The centre picks up `Σ ξ_i η_i / 2` from
/// `e^{ξX} e^{ηY} = e^{ξX + ηY + (ξη/2) Z}`; the `Z` pulse removes it.
pub fn plan_heisenberg(xi: &[f64], eta: &[f64], zeta: f64, eps: f64) -> Result<ControlSchedule> {
    check_dim(xi.len(), eta.len())?;
    positive("eps", eps)?;
    let d = xi.len();
    let mut sched = ControlSchedule::empty(d);
    for (i, &x) in xi.iter().enumerate() {
        if x != 0.0 {
            sched = sched.then(pulse(d, PulseAxis::X(i), x, pulse_duration(x, eps))?)?;
        }
    }
    for (i, &y) in eta.iter().enumerate() {
        if y != 0.0 {
            sched = sched.then(recipe_y(d, i, y, eps, eps)?)?;
        }
    }
    let correction = zeta - 0.5 * xi.iter().zip(eta).map(|(x, y)| x * y).sum::<f64>();
    if correction != 0.0 {
        sched = sched.then(pulse(d, PulseAxis::Z, correction, eps)?)?;
    }
    Ok(sched)
}

/// Open-loop schedule for `g = (I, v, z) (S, 0, 0)` at accuracy `eps`:
/// Heisenberg word, then `e^{t1(a-b)} e^{t2 c} e^{t3 b}` from the Iwasawa
/// factors of `S`.
pub fn synthesize(g: &GroupElement, eps: f64) -> Result<ControlSchedule> {
    g.validate()?;
    positive("eps", eps)?;
    let d = g.d;
    let f = iwasawa(&g.s)?;
    let mut sched = plan_heisenberg(&g.xi(), &g.eta(), g.z, eps)?;
    sched = sched.then(recipe_rotation(d, f.t1, eps)?)?;
    if f.t2 != 0.0 {
        sched = sched.then(dilation(d, f.t2, eps, eps)?.0)?;
    }
    if f.t3 != 0.0 {
        sched = sched.then(pulse(d, PulseAxis::B, f.t3, pulse_duration(f.t3, eps))?)?;
    }
    Ok(sched)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SynthReport {
    pub schedule: ControlSchedule,
    pub target: GroupElement,
    pub achieved: GroupElement,
    pub error: f64,
    pub total_time: f64,
    pub epsilon: f64,
    pub iterations: usize,
    pub tolerance: f64,
    pub converged: bool,
}

/// Closed-loop planner: halves `eps` from `eps0` until the simulated endpoint
/// is within `tol` of `g`. Non-convergence is returned as a report with
/// `converged = false`.
pub fn plan_target(g: &GroupElement, tol: f64, eps0: f64, max_iter: usize) -> Result<SynthReport> {
    positive("tol", tol)?;
    positive("eps0", eps0)?;
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let mut eps = eps0;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let schedule = synthesize(g, eps)?;
        let achieved = simulate(&schedule)?;
        let error = distance(&achieved, g)?;
        let converged = error <= tol;
        if converged || iterations >= max_iter {
            return Ok(SynthReport {
                total_time: schedule.total_time(),
                schedule,
                target: g.clone(),
                achieved,
                error,
                epsilon: eps,
                iterations,
                tolerance: tol,
                converged,
            });
        }
        eps *= 0.5;
    }
}
