use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Real 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Mat2([[m11, m12], [m21, m22]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Inverse of a unimodular matrix (adjugate).
    pub fn inverse_unimodular(&self) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[1][1], -m[0][1], -m[1][0], m[0][0])
    }

    pub fn inverse(&self) -> Mat2 {
        let det = self.det();
        self.inverse_unimodular().scale(1.0 / det)
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        let m = &self.0;
        Mat2::new(k * m[0][0], k * m[0][1], k * m[1][0], k * m[1][1])
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    /// Conjugation by the coordinate swap `P = [[0,1],[1,0]]`.
    pub fn swap_conj(&self) -> Mat2 {
        let m = &self.0;
        Mat2::new(m[1][1], m[1][0], m[0][1], m[0][0])
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// `exp(s * m)` for traceless `m`, using `m^2 = -det(m) I`.
    pub fn expm_traceless(&self, s: f64) -> Mat2 {
        let delta = -self.det() * s * s;
        let (ch, sh) = cosh_sinhc(delta);
        let mut out = self.scale(s * sh);
        out.0[0][0] += ch;
        out.0[1][1] += ch;
        out
    }

    /// `int_0^1 exp(s m) ds` for traceless `m`.
    pub fn phi_traceless(&self) -> Mat2 {
        let delta = -self.det();
        let (i0, i1) = phi_coefficients(delta);
        let mut out = self.scale(i1);
        out.0[0][0] += i0;
        out.0[1][1] += i0;
        out
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Returns `(C, S)` with `C = cosh(sqrt(delta))`, `S = sinh(sqrt(delta))/sqrt(delta)`,
/// continued analytically to `delta <= 0`.
pub(crate) fn cosh_sinhc(delta: f64) -> (f64, f64) {
    if delta.abs() < 1e-4 {
        let d = delta;
        let c = 1.0 + d / 2.0 + d * d / 24.0 + d * d * d / 720.0;
        let s = 1.0 + d / 6.0 + d * d / 120.0 + d * d * d / 5040.0;
        (c, s)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-delta).sqrt();
        (r.cos(), r.sin() / r)
    }
}

/// Coefficients `(I0, I1)` with `int_0^1 exp(s m) ds = I0 I + I1 m` where `m^2 = delta I`.
fn phi_coefficients(delta: f64) -> (f64, f64) {
    if delta.abs() < 1e-4 {
        let d = delta;
        let i0 = 1.0 + d / 6.0 + d * d / 120.0 + d * d * d / 5040.0;
        let i1 = 0.5 + d / 24.0 + d * d / 720.0 + d * d * d / 40320.0;
        (i0, i1)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        (r.sinh() / r, (r.cosh() - 1.0) / delta)
    } else {
        let r = (-delta).sqrt();
        (r.sin() / r, (1.0 - r.cos()) / (-delta))
    }
}
