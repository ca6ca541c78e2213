use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lie::{GroupElement, Mat2};
use crate::schedule::{ControlSchedule, ControlSegment};
use crate::sim::simulate;

/// `z ↦ M z + b` on `T*ℝ^d` with coordinates `(q_1..q_d, p_1..p_d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSymplecticMap {
    pub d: usize,
    /// Row-major `2d × 2d`.
    pub m: Vec<f64>,
    pub b: Vec<f64>,
}

impl AffineSymplecticMap {
    pub fn identity(d: usize) -> Self {
        let n = 2 * d;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = 1.0;
        }
        Self { d, m, b: vec![0.0; n] }
    }

    /// The same 2×2 block acting on every `(q_i, p_i)` pair, plus a shift.
    pub fn from_block(d: usize, s: &Mat2, q_shift: &[f64], p_shift: &[f64]) -> Result<Self> {
        check_dim(d, q_shift.len())?;
        check_dim(d, p_shift.len())?;
        let n = 2 * d;
        let mut m = vec![0.0; n * n];
        for i in 0..d {
            m[i * n + i] = s.0[0][0];
            m[i * n + d + i] = s.0[0][1];
            m[(d + i) * n + i] = s.0[1][0];
            m[(d + i) * n + d + i] = s.0[1][1];
        }
        let b = q_shift.iter().chain(p_shift).copied().collect();
        Ok(Self { d, m, b })
    }

    fn dim(&self) -> usize {
        2 * self.d
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| self.b[i] + (0..n).map(|j| self.m[i * n + j] * z[j]).sum::<f64>()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dim(self.d, other.d)?;
        let n = self.dim();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i * n + k];
                if a != 0.0 {
                    for j in 0..n {
                        m[i * n + j] += a * other.m[k * n + j];
                    }
                }
            }
        }
        let b = self.apply(&other.b);
        Ok(Self { d: self.d, m, b })
    }

    /// Inverse through `M^{-1} = -J Mᵀ J`, valid for symplectic `M`.
    pub fn inverse(&self) -> Self {
        let (n, d) = (self.dim(), self.d);
        let j = |i: usize| if i < d { i + d } else { i - d };
        let sgn = |i: usize| if i < d { 1.0 } else { -1.0 };
        let mut m = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                // (-J Mᵀ J)_{rc} = -Σ J_{r,k} M_{l,k} J_{l,c}
                m[r * n + c] = -sgn(r) * self.m[j(c) * n + j(r)] * sgn(j(c));
            }
        }
        let mut out = Self { d, m, b: vec![0.0; n] };
        out.b = out.apply(&self.b).iter().map(|x| -x).collect();
        out
    }

    /// `max |Mᵀ J M − J|`.
    pub fn symplectic_residual(&self) -> f64 {
        let (n, d) = (self.dim(), self.d);
        let jm = |r: usize, c: usize| -> f64 {
            if r < d && c == r + d {
                1.0
            } else if r >= d && c + d == r {
                -1.0
            } else {
                0.0
            }
        };
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        let j = jm(k, l);
                        if j != 0.0 {
                            s += self.m[k * n + r] * j * self.m[l * n + c];
                        }
                    }
                }
                worst = worst.max((s - jm(r, c)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.d, other.d)?;
        Ok(self.m.iter().zip(&other.m).chain(self.b.iter().zip(&other.b)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Block and shifts when every `(q_i, p_i)` pair sees the same 2×2 block.
    pub fn as_block(&self) -> Option<(Mat2, Vec<f64>, Vec<f64>)> {
        let (n, d) = (self.dim(), self.d);
        let s = Mat2::new(self.m[0], self.m[d], self.m[d * n], self.m[d * n + d]);
        let rebuilt = Self::from_block(d, &s, &self.b[..d], &self.b[d..]).ok()?;
        (rebuilt.m == self.m).then(|| (s, self.b[..d].to_vec(), self.b[d..].to_vec()))
    }
}

/// Exact flow over one segment of `q' = p`, `p' = -k q - u`, `k` the physical
/// stiffness.
fn flow(d: usize, dt: f64, k: f64, u: &[f64]) -> Result<AffineSymplecticMap> {
    check_dim(d, u.len())?;
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("segment duration must be nonnegative, got {dt}")));
    }
    let gen = Mat2::new(0.0, 1.0, -k, 0.0);
    let s = gen.expm_traceless(dt);
    // variation of constants: ∫_0^dt e^{sK} ds · (0, -u)
    let integral = gen.scale(dt).phi_traceless().scale(dt);
    let (q_shift, p_shift): (Vec<f64>, Vec<f64>) = u.iter().map(|&ui| {
        let w = integral.apply([0.0, -ui]);
        (w[0], w[1])
    }).unzip();
    AffineSymplecticMap::from_block(d, &s, &q_shift, &p_shift)
}

/// Flow map of a segment in the group convention shared with the
/// simulator: `u0` enters with the sign that makes `schedule ↦ map` a
/// homomorphism from the group (so `u0 = -1` is the oscillator and a `b`
/// pulse of weight `w` gives `(q, p + wq)`). Dipolar controls push `p` by
/// `-u dt`.
pub fn segment_map(seg: &ControlSegment, d: usize) -> Result<AffineSymplecticMap> {
    seg.validate(d)?;
    flow(d, seg.dt, -seg.u0, &seg.u)
}

/// Flow map of Hamilton's equations for `|p|²/2 + u0 |q|²/2 + u·q` taken
/// literally (`u0 = 1` is the oscillator).
pub fn segment_map_physical(seg: &ControlSegment, d: usize) -> Result<AffineSymplecticMap> {
    seg.validate(d)?;
    flow(d, seg.dt, seg.u0, &seg.u)
}

/// `Φ` with transported density `ρ0 ∘ Φ`: segment maps composed in schedule
/// order, `Φ(s1 ∥ s2) = Φ1 ∘ Φ2`.
pub fn schedule_map(schedule: &ControlSchedule) -> Result<AffineSymplecticMap> {
    schedule.validate()?;
    schedule.segments.iter().try_fold(AffineSymplecticMap::identity(schedule.d), |acc, seg| {
        acc.compose(&segment_map(seg, schedule.d)?)
    })
}

/// The dictionary from group elements to affine maps: `S` acts blockwise,
/// and the Heisenberg pair `(x_i, y_i)` becomes the shift `(q_i, p_i) = (-y_i, -x_i)`.
/// The centre and the winding have no classical image.
pub fn lambda(g: &GroupElement) -> Result<AffineSymplecticMap> {
    g.validate()?;
    let xi = g.xi();
    let eta = g.eta();
    let q: Vec<f64> = eta.iter().map(|y| -y).collect();
    let p: Vec<f64> = xi.iter().map(|x| -x).collect();
    AffineSymplecticMap::from_block(g.d, &g.s, &q, &p)
}

/// Preimage under [`lambda`] with centre 0 and winding 0; `None` unless the
/// linear part is blockwise.
pub fn lambda_inverse(map: &AffineSymplecticMap) -> Option<GroupElement> {
    let (s, q, p) = map.as_block()?;
    let xi: Vec<f64> = p.iter().map(|v| -v).collect();
    let eta: Vec<f64> = q.iter().map(|v| -v).collect();
    let h = GroupElement::heisenberg(&xi, &eta, 0.0).ok()?;
    Some(GroupElement { s, ..h })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub max_deviation: f64,
    pub drift_deviation: f64,
    pub b_pulse_deviation: f64,
    pub x_pulse_deviation: f64,
    pub passed: bool,
}

pub const CORRESPONDENCE_TOL: f64 = 1e-8;

/// Compares `Λ(simulate(s))` with `schedule_map(s)` for each schedule, after
/// the generator tests that pin the orientation of `Λ`.
pub fn correspondence_check<'a>(schedules: impl IntoIterator<Item = &'a ControlSchedule>) -> Result<CorrespondenceReport> {
    let t = 0.7;
    let drift = ControlSchedule::single(1, ControlSegment::free(1, t));
    let drift_dev = schedule_map(&drift)?
        .max_abs_diff(&AffineSymplecticMap::from_block(1, &Mat2::new(1.0, t, 0.0, 1.0), &[0.0], &[0.0])?)?;
    let (w, h) = (0.3, 1e-9);
    let bp = ControlSchedule::single(1, ControlSegment::new(h, w / h, vec![0.0], 0.0));
    let bp_dev = schedule_map(&bp)?
        .max_abs_diff(&AffineSymplecticMap::from_block(1, &Mat2::new(1.0, 0.0, w, 1.0), &[0.0], &[0.0])?)?;
    let xp = ControlSchedule::single(1, ControlSegment::new(h, 0.0, vec![w / h], 0.0));
    let xp_dev = schedule_map(&xp)?.max_abs_diff(&AffineSymplecticMap::from_block(1, &Mat2::new(1.0, 0.0, 0.0, 1.0), &[0.0], &[-w])?)?;
    let mut worst: f64 = 0.0;
    for s in schedules {
        let dev = lambda(&simulate(s)?)?.max_abs_diff(&schedule_map(s)?)?;
        worst = worst.max(dev);
    }
    // the pulse checks carry the O(h) drift of the finite pulse
    let passed = worst <= CORRESPONDENCE_TOL && drift_dev <= 1e-12 && bp_dev <= 1e-8 && xp_dev <= 1e-8;
    Ok(CorrespondenceReport {
        max_deviation: worst,
        drift_deviation: drift_dev,
        b_pulse_deviation: bp_dev,
        x_pulse_deviation: xp_dev,
        passed,
    })
}
