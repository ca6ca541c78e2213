use num_complex::Complex64;

use super::grid::{AliasGuard, Spectral, WaveGrid};
use crate::error::{check_dim, Error, Result};
use crate::schedule::ControlSchedule;

/// How each substep splits kinetic and potential parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitScheme {
    /// `e^{−ihV/2} e^{−ihT} e^{−ihV/2}`; second order.
    #[default]
    Strang,
    /// Same chirp–free–chirp shape with coefficients chosen so that each
    /// substep reproduces the quadratic flow exactly (up to a global phase
    /// when `u ≠ 0`): potential weight `tan(ωh/2)/ω` per half and kinetic
    /// time `sin(ωh)/ω`, hyperbolic analogues for repelling potentials.
    Exact,
}

/// Substep controls for [`propagate_with`].
#[derive(Clone, Copy, Debug)]
pub struct StepOptions {
    pub dt_max: f64,
    pub scheme: SplitScheme,
    /// Upper bound on `h·sqrt|u0|` per substep, keeping strongly confining
    /// or repelling segments resolved.
    pub max_rotation: f64,
    pub alias_threshold: f64,
}

impl StepOptions {
    pub fn new(dt_max: f64) -> Self {
        Self {
            dt_max,
            scheme: SplitScheme::Strang,
            max_rotation: 0.02,
            alias_threshold: AliasGuard::DEFAULT_THRESHOLD,
        }
    }

    pub fn exact(dt_max: f64) -> Self {
        Self { scheme: SplitScheme::Exact, ..Self::new(dt_max) }
    }
}

/// `(potential weight per half step, kinetic time)` for curvature `q` of
/// the physical potential `q |x|²/2`.
fn split_weights(scheme: SplitScheme, q: f64, h: f64) -> (f64, f64) {
    if scheme == SplitScheme::Strang || q == 0.0 {
        return (h / 2.0, h);
    }
    let w = q.abs().sqrt();
    let th = w * h / 2.0;
    if q > 0.0 {
        (th.tan() / w, (2.0 * th).sin() / w)
    } else {
        (th.tanh() / w, (2.0 * th).sinh() / w)
    }
}

/// Strang split-step integration of
/// `i ψ_t = (−Δ/2 − u0 |x|²/2 + u·x − r) ψ` segment by segment.
///
/// The sign of `u0` follows the group convention of the schedule: `u0 = −1`
/// is the harmonic oscillator. Fails with an aliasing error as soon as the
/// state reaches the outer band of the box or of the frequency window.
pub fn propagate(psi: &WaveGrid, schedule: &ControlSchedule, dt_max: f64) -> Result<WaveGrid> {
    let spectral = Spectral::new(psi.shape());
    propagate_with(psi, schedule, StepOptions::new(dt_max), &spectral)
}

pub fn propagate_with(
    psi: &WaveGrid,
    schedule: &ControlSchedule,
    opts: StepOptions,
    spectral: &Spectral,
) -> Result<WaveGrid> {
    psi.validate()?;
    schedule.validate()?;
    check_dim(psi.d, schedule.d)?;
    if spectral.shape() != psi.shape() {
        return Err(Error::GridMismatch("transform plan built for a different grid".into()));
    }
    if !(opts.dt_max > 0.0) || !(opts.max_rotation > 0.0) {
        return Err(Error::InvalidArgument("step sizes must be positive".into()));
    }
    let shape = psi.shape();
    let mut guard = AliasGuard::new(shape);
    guard.threshold = opts.alias_threshold;
    let mut out = psi.clone();
    let k2: Vec<f64> = shape.map_modes(|k| k.iter().map(|v| v * v).sum());

    for seg in &schedule.segments {
        if seg.dt == 0.0 {
            continue;
        }
        let by_len = (seg.dt / opts.dt_max).ceil();
        let by_rate = (seg.dt * seg.u0.abs().sqrt() / opts.max_rotation).ceil();
        let steps = by_len.max(by_rate).max(1.0) as usize;
        let h = seg.dt / steps as f64;
        let (weight, kin_time) = split_weights(opts.scheme, -seg.u0, h);
        let potential: Vec<f64> = shape.map_nodes(|x| {
            let mut v = 0.0;
            for i in 0..x.len() {
                v += -seg.u0 * x[i] * x[i] / 2.0 + seg.u[i] * x[i];
            }
            v
        });
        let central = Complex64::from_polar(1.0, 0.5 * h * seg.r);
        let half: Vec<Complex64> =
            potential.iter().map(|v| Complex64::from_polar(1.0, -weight * v) * central).collect();
        let full: Vec<Complex64> = half.iter().map(|z| z * z).collect();
        let kinetic: Vec<Complex64> = k2.iter().map(|k| Complex64::from_polar(1.0, -0.5 * kin_time * k)).collect();

        let data = &mut out.values;
        data.iter_mut().zip(&half).for_each(|(z, m)| *z *= m);
        for step in 0..steps {
            spectral.forward(data);
            guard.check_frequency(data)?;
            data.iter_mut().zip(&kinetic).for_each(|(z, m)| *z *= m);
            spectral.inverse(data);
            let pot = if step + 1 == steps { &half } else { &full };
            data.iter_mut().zip(pot).for_each(|(z, m)| *z *= m);
        }
        guard.check_position(data)?;
    }
    guard.check(spectral, &out.values)?;
    Ok(out)
}
