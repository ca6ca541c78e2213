use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::mat2::Mat2;
use crate::error::{Error, Result};

/// Angles within this distance of 2π are folded back to 0.
const ANGLE_SNAP: f64 = 1e-12;

/// Factors `(t1, t2, t3)` of `S = e^{t1 (a-b)} e^{t2 c} e^{t3 b}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Iwasawa {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

/// Angle of a plane vector measured as `atan2(v0, v1)`, in `(-π, π]`.
/// This is the angle by which `e^{t(a-b)}` turns the second basis vector.
pub(crate) fn vector_angle(v: [f64; 2]) -> f64 {
    v[0].atan2(v[1])
}

/// Iwasawa angle of `S`: the angle of its second column, in `[0, 2π)`.
pub fn iwasawa_angle(s: &Mat2) -> f64 {
    let t = vector_angle([s.0[0][1], s.0[1][1]]).rem_euclid(TAU);
    if t >= TAU - ANGLE_SNAP {
        0.0
    } else {
        t
    }
}

pub fn rotation(t: f64) -> Mat2 {
    let (s, c) = t.sin_cos();
    Mat2::new(c, s, -s, c)
}

pub fn iwasawa(s: &Mat2) -> Result<Iwasawa> {
    let det = s.det();
    if !s.is_finite() || (det - 1.0).abs() > 1e-9 {
        return Err(Error::Determinant(det));
    }
    let m = &s.0;
    let t1 = iwasawa_angle(s);
    let t2 = m[0][1].hypot(m[1][1]).ln();
    let (sn, cs) = t1.sin_cos();
    let t3 = (-t2).exp() * (m[0][0] * sn + m[1][0] * cs);
    Ok(Iwasawa { t1, t2, t3 })
}

impl Iwasawa {
    /// `R(t1) diag(e^{-t2}, e^{t2}) [[1,0],[t3,1]]`.
    pub fn recompose(&self) -> Mat2 {
        let d = Mat2::new((-self.t2).exp(), 0.0, 0.0, self.t2.exp());
        let n = Mat2::new(1.0, 0.0, self.t3, 1.0);
        rotation(self.t1) * d * n
    }
}
